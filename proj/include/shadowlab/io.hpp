#ifndef SHADOWLAB_IO_HPP
#define SHADOWLAB_IO_HPP

// Deterministic artifact emission: RFC-4180 CSV with 17 significant digits,
// UTF-8 JSON with sorted keys, FNV-1a checksums and the run manifest.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace shadowlab {

/// 17-significant-digit decimal rendering (bit-stable across runs).
std::string format_double(double x);

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }
    std::size_t rows() const { return rows_; }

  private:
    std::string text_;
    std::size_t rows_ = 0;
    std::size_t columns_ = 0;
};

std::string csv_cell(double x);
std::string csv_cell(const std::string& s);

std::uint64_t fnv1a(const std::string& data);
std::string fnv1a_hex(const std::string& data);

struct EmittedFile {
    std::string name;      // relative to the output directory
    std::string checksum;  // fnv1a-64 hex of the bytes
    std::size_t bytes = 0;
};

/// Collects files in memory and writes them (manifest last).
class ArtifactSink {
  public:
    explicit ArtifactSink(std::filesystem::path out_dir);
    void emit(const std::string& name, const std::string& bytes);
    const std::vector<EmittedFile>& files() const { return files_; }
    const std::filesystem::path& dir() const { return dir_; }
    /// Writes manifest.json (config hash, versions, wall time, statuses,
    /// emitted files with checksums) as the last file of the run.
    void write_manifest(const nlohmann::json& manifest_fields);

  private:
    std::filesystem::path dir_;
    std::vector<EmittedFile> files_;
};

}  // namespace shadowlab

#endif
