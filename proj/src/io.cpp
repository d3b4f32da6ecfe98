#include "shadowlab/io.hpp"

#include <cstdio>
#include <fstream>

#include "shadowlab/errors.hpp"

namespace shadowlab {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    row(header);
    rows_ = 0;
}

namespace {
std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}
}  // namespace

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (columns_ != 0 && cells.size() != columns_)
        throw Error("CsvWriter: row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += quote_if_needed(cells[i]);
    }
    text_ += "\r\n";
    ++rows_;
}

std::string csv_cell(double x) { return format_double(x); }
std::string csv_cell(const std::string& s) { return s; }

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a_hex(const std::string& data) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(data)));
    return buf;
}

ArtifactSink::ArtifactSink(std::filesystem::path out_dir) : dir_(std::move(out_dir)) {
    std::filesystem::create_directories(dir_);
}

void ArtifactSink::emit(const std::string& name, const std::string& bytes) {
    std::filesystem::path p = dir_ / name;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("ArtifactSink: cannot open " + p.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.close();
    files_.push_back({name, fnv1a_hex(bytes), bytes.size()});
}

void ArtifactSink::write_manifest(const nlohmann::json& manifest_fields) {
    nlohmann::json m = manifest_fields;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : files_) {
        files.push_back({{"name", f.name}, {"checksum", f.checksum}, {"bytes", f.bytes}});
    }
    m["files"] = files;
    std::string bytes = m.dump(2) + "\n";
    std::filesystem::path p = dir_ / "manifest.json";
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("ArtifactSink: cannot open " + p.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace shadowlab
