#ifndef SHADOWLAB_STIEFEL_HPP
#define SHADOWLAB_STIEFEL_HPP

// Coordinate models for the Brieskorn/Stiefel 5-manifold
//   V = { u in C^4 : Q(u) = 0, |u| = 1 },
// spheroid points in C^2, coordinate frames for open-book/Lefschetz
// structure, and leaf labels.

#include <array>
#include <complex>
#include <cstdint>

#include "shadowlab/errors.hpp"

namespace shadowlab {

using cd = std::complex<double>;

using ComplexVec4 = std::array<cd, 4>;

double norm2(const ComplexVec4& v);
double vnorm(const ComplexVec4& v);
bool all_finite(const ComplexVec4& v);

/// The quadratic constraint cutting the 5-manifold out of S^7.
/// Either the standard quadric sum(u_j^2), or a "split" shape with two
/// square slots and one product pair:  sum_{j in squares} u_j^2 + 2*kappa*u_a*u_b.
/// The split shape carries the Katok w-coordinates (kappa = -i, pair (2,3))
/// and the scr3bp re-frame v = (u0, zeta, u3, zeta') (kappa = 1, pair (1,3)).
struct QuadricForm {
    enum class Slot : std::uint8_t { Square, PairFirst, PairSecond };

    std::array<Slot, 4> slot{Slot::Square, Slot::Square, Slot::Square, Slot::Square};
    int pair_a = -1;
    int pair_b = -1;
    cd kappa{0.0, 0.0};

    static QuadricForm standard();
    static QuadricForm split(int a, int b, cd kappa);

    bool is_standard() const { return pair_a < 0; }
    bool is_square_slot(int j) const { return slot[static_cast<std::size_t>(j)] == Slot::Square; }
    /// Index of the product partner of slot j (j must be a pair slot).
    int partner(int j) const { return j == pair_a ? pair_b : pair_a; }

    cd eval(const ComplexVec4& u) const;
    bool operator==(const QuadricForm& o) const {
        return pair_a == o.pair_a && pair_b == o.pair_b && kappa == o.kappa;
    }
};

/// Validated point of the Stiefel model: Q(u) = 0 and |u| = 1 to 1e-10.
struct StiefelPoint {
    ComplexVec4 u{};
    QuadricForm form = QuadricForm::standard();

    const cd& operator[](int j) const { return u[static_cast<std::size_t>(j)]; }
};

/// Residuals of the two defining constraints.
struct ConstraintResiduals {
    double quadric;  // |Q(u)|
    double norm;     // | |u| - 1 |
};

ConstraintResiduals constraint_residuals(const ComplexVec4& u, const QuadricForm& form);

/// Validate (and if necessary project) a raw vector onto the model.
/// One Gauss-Newton projection step onto the joint constraint set is taken
/// when the residuals exceed tol; if they still exceed tol afterwards the
/// input is rejected.
StiefelPoint make_stiefel(const ComplexVec4& v, double tol = 1e-10,
                          const QuadricForm& form = QuadricForm::standard());

/// Unitary Katok change of coordinates  w0=z0, w1=z1,
/// w2=(sqrt2/2)(z2+i z3), w3=(i sqrt2/2)(z2-i z3).
/// Maps {sum z^2 = 0} onto {w0^2+w1^2 = 2i w2 w3}.
ComplexVec4 katok_frame_change(const ComplexVec4& z);
ComplexVec4 katok_frame_change_inverse(const ComplexVec4& w);

/// scr3bp re-frame v = (u0, (u1+i u2)/sqrt2, u3, (u1-i u2)/sqrt2);
/// maps the standard quadric onto {v0^2 + v2^2 + 2 v1 v3 = 0}.
ComplexVec4 scr3bp_frame_change(const ComplexVec4& u);
ComplexVec4 scr3bp_frame_change_inverse(const ComplexVec4& v);

/// Which coordinate carries the open book and which the page Lefschetz
/// fibration. conjugate_ob flips the orientation of the open-book angle.
struct CoordinateFrame {
    int ob_axis = 0;
    int lf_axis = 1;
    bool conjugate_ob = false;
};

void validate_frame(const CoordinateFrame& f);

/// Names the leaf of the IP foliation through a point: open-book angle
/// theta in [0,2pi) and the Lefschetz base value c = sqrt2 * u_lf.
struct LeafLabel {
    double theta = 0.0;
    cd c{0.0, 0.0};
};

/// Angle of the open-book coordinate, in [0, 2pi). Throws OnBinding when
/// |u_ob| <= 1e-12.
double ob_phase(const StiefelPoint& p, const CoordinateFrame& f);

LeafLabel leaf_label(const StiefelPoint& p, const CoordinateFrame& f);

/// Leaf equality in the circle metric on theta and the plane metric on c.
bool labels_equal(const LeafLabel& a, const LeafLabel& b, double tol_theta = 1e-8,
                  double tol_c = 1e-8);

/// Distance of two angles on the circle.
double circle_dist(double a, double b);

/// Point of the spheroid S(a,b) model: (u,v) in C^2 with |u|^2+|v|^2 = 1.
struct SpheroidPoint {
    cd u{0.0, 0.0};
    cd v{0.0, 0.0};
};

SpheroidPoint make_spheroid_point(cd u, cd v, double tol = 1e-10);

/// Normalized projection (u_ob, u_lf)/|(u_ob, u_lf)| onto the spheroid model.
/// Throws DegenerateProjection when both coordinates vanish (the link of the
/// i-th fibration).
SpheroidPoint spheroid_project(const StiefelPoint& p, const CoordinateFrame& f);

}  // namespace shadowlab

#endif
