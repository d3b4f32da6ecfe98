#include "shadowlab/stiefel.hpp"

#include <cmath>
#include <sstream>

namespace shadowlab {

namespace {
constexpr double kBindingTol = 1e-12;

std::string fmt_residuals(const ConstraintResiduals& r) {
    std::ostringstream os;
    os << "quadric residual " << r.quadric << ", norm residual " << r.norm;
    return os.str();
}
}  // namespace

double norm2(const ComplexVec4& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}

double vnorm(const ComplexVec4& v) { return std::sqrt(norm2(v)); }

bool all_finite(const ComplexVec4& v) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

QuadricForm QuadricForm::standard() { return QuadricForm{}; }

QuadricForm QuadricForm::split(int a, int b, cd kappa) {
    QuadricForm f;
    f.pair_a = a;
    f.pair_b = b;
    f.kappa = kappa;
    f.slot[static_cast<std::size_t>(a)] = Slot::PairFirst;
    f.slot[static_cast<std::size_t>(b)] = Slot::PairSecond;
    return f;
}

cd QuadricForm::eval(const ComplexVec4& u) const {
    cd q{0.0, 0.0};
    for (int j = 0; j < 4; ++j)
        if (is_square_slot(j)) q += u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)];
    if (pair_a >= 0)
        q += 2.0 * kappa * u[static_cast<std::size_t>(pair_a)] * u[static_cast<std::size_t>(pair_b)];
    return q;
}

ConstraintResiduals constraint_residuals(const ComplexVec4& u, const QuadricForm& form) {
    return {std::abs(form.eval(u)), std::abs(vnorm(u) - 1.0)};
}

namespace {

// One Gauss-Newton step for the 3 real constraints
// (Re Q, Im Q, |u|^2 - 1) on R^8.
ComplexVec4 gauss_newton_project(const ComplexVec4& v, const QuadricForm& form) {
    // Gradients of Q: dQ = sum 2 u_j du_j (+ pair terms); as complex row.
    ComplexVec4 dq{};
    for (int j = 0; j < 4; ++j) {
        auto ju = static_cast<std::size_t>(j);
        if (form.is_square_slot(j)) {
            dq[ju] = 2.0 * v[ju];
        } else {
            auto pu = static_cast<std::size_t>(form.partner(j));
            dq[ju] = 2.0 * form.kappa * v[pu];
        }
    }
    // Rows of the real 3x8 Jacobian J, as complex vectors r with the pairing
    // J_row . delta = sum Re(r_j) dx_j + Im-part bookkeeping: we use the
    // identification delta_j = dx_j + i dy_j and row entries a_j with
    // J.delta = sum Re(a_j conj(delta_j))? Simpler: build explicitly.
    // constraint values
    cd Q = form.eval(v);
    double c0 = Q.real(), c1 = Q.imag(), c2 = norm2(v) - 1.0;

    // J as 3 x 8 (real): columns ordered (x0,y0,x1,y1,...)
    double J[3][8];
    for (int j = 0; j < 4; ++j) {
        auto ju = static_cast<std::size_t>(j);
        // d(Re Q)/dx_j = Re(dq_j), d(Re Q)/dy_j = -Im(dq_j)
        J[0][2 * j] = dq[ju].real();
        J[0][2 * j + 1] = -dq[ju].imag();
        // d(Im Q)/dx_j = Im(dq_j), d(Im Q)/dy_j = Re(dq_j)
        J[1][2 * j] = dq[ju].imag();
        J[1][2 * j + 1] = dq[ju].real();
        J[2][2 * j] = 2.0 * v[ju].real();
        J[2][2 * j + 1] = 2.0 * v[ju].imag();
    }
    // Solve (J J^T) lam = c, delta = -J^T lam.
    double A[3][3], c[3] = {c0, c1, c2};
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) {
            double acc = 0.0;
            for (int k = 0; k < 8; ++k) acc += J[r][k] * J[s][k];
            A[r][s] = acc;
        }
    // 3x3 solve with partial pivoting; singular systems leave v unchanged
    // (the caller then rejects on residuals).
    int piv[3] = {0, 1, 2};
    double M[3][4];
    for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 3; ++s) M[r][s] = A[r][s];
        M[r][3] = c[r];
    }
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(M[r][col]) > std::abs(M[best][col])) best = r;
        if (std::abs(M[best][col]) < 1e-14) return v;
        if (best != col) {
            for (int s = 0; s < 4; ++s) std::swap(M[col][s], M[best][s]);
            std::swap(piv[col], piv[best]);
        }
        for (int r = col + 1; r < 3; ++r) {
            double f = M[r][col] / M[col][col];
            for (int s = col; s < 4; ++s) M[r][s] -= f * M[col][s];
        }
    }
    double lam[3];
    for (int r = 2; r >= 0; --r) {
        double acc = M[r][3];
        for (int s = r + 1; s < 3; ++s) acc -= M[r][s] * lam[s];
        lam[r] = acc / M[r][r];
    }
    ComplexVec4 out = v;
    for (int j = 0; j < 4; ++j) {
        double dx = 0.0, dy = 0.0;
        for (int r = 0; r < 3; ++r) {
            dx += J[r][2 * j] * lam[r];
            dy += J[r][2 * j + 1] * lam[r];
        }
        out[static_cast<std::size_t>(j)] -= cd(dx, dy);
    }
    return out;
}

}  // namespace

StiefelPoint make_stiefel(const ComplexVec4& v, double tol, const QuadricForm& form) {
    if (!all_finite(v)) throw ConstraintViolation("make_stiefel: non-finite entries");
    if (vnorm(v) <= 0.0) throw ConstraintViolation("make_stiefel: zero vector");
    ComplexVec4 u = v;
    ConstraintResiduals r = constraint_residuals(u, form);
    if (r.quadric > tol || r.norm > tol) {
        u = gauss_newton_project(u, form);
        r = constraint_residuals(u, form);
        if (r.quadric > tol || r.norm > tol)
            throw ConstraintViolation("make_stiefel: constraints unmet after projection (" +
                                      fmt_residuals(r) + ")");
    }
    return StiefelPoint{u, form};
}

ComplexVec4 katok_frame_change(const ComplexVec4& z) {
    const double s = std::sqrt(2.0) / 2.0;
    const cd i{0.0, 1.0};
    return {z[0], z[1], s * (z[2] + i * z[3]), i * s * (z[2] - i * z[3])};
}

ComplexVec4 katok_frame_change_inverse(const ComplexVec4& w) {
    const double s = std::sqrt(2.0) / 2.0;
    const cd i{0.0, 1.0};
    // z2 = s*(w2 - i*w3), z3 = -i*s*(w2 + i*w3)  (unitary inverse)
    return {w[0], w[1], s * (w[2] - i * w[3]), -i * s * (w[2] + i * w[3])};
}

ComplexVec4 scr3bp_frame_change(const ComplexVec4& u) {
    const double s = 1.0 / std::sqrt(2.0);
    const cd i{0.0, 1.0};
    return {u[0], s * (u[1] + i * u[2]), u[3], s * (u[1] - i * u[2])};
}

ComplexVec4 scr3bp_frame_change_inverse(const ComplexVec4& v) {
    const double s = 1.0 / std::sqrt(2.0);
    const cd i{0.0, 1.0};
    return {v[0], s * (v[1] + v[3]), -i * s * (v[1] - v[3]), v[2]};
}

void validate_frame(const CoordinateFrame& f) {
    if (f.ob_axis < 0 || f.ob_axis > 3 || f.lf_axis < 0 || f.lf_axis > 3)
        throw ConstraintViolation("CoordinateFrame: axes must be in 0..3");
    if (f.ob_axis == f.lf_axis) throw ConstraintViolation("CoordinateFrame: axes must be distinct");
}

double ob_phase(const StiefelPoint& p, const CoordinateFrame& f) {
    validate_frame(f);
    cd w = p[f.ob_axis];
    if (std::abs(w) <= kBindingTol) throw OnBinding("ob_phase: point on the binding");
    if (f.conjugate_ob) w = std::conj(w);
    double th = std::arg(w);
    if (th < 0.0) th += 2.0 * M_PI;
    return th;
}

LeafLabel leaf_label(const StiefelPoint& p, const CoordinateFrame& f) {
    LeafLabel lab;
    lab.theta = ob_phase(p, f);
    lab.c = std::sqrt(2.0) * p[f.lf_axis];
    // |c| <= 1 for square slots; product-pair slots attain sqrt2 off the binding.
    double bound = p.form.is_square_slot(f.lf_axis) ? 1.0 : std::sqrt(2.0);
    if (std::abs(lab.c) > bound + 1e-9)
        throw ConstraintViolation("leaf_label: |c| exceeds the slot bound");
    return lab;
}

double circle_dist(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * M_PI);
    return std::min(d, 2.0 * M_PI - d);
}

bool labels_equal(const LeafLabel& a, const LeafLabel& b, double tol_theta, double tol_c) {
    return circle_dist(a.theta, b.theta) <= tol_theta && std::abs(a.c - b.c) <= tol_c;
}

SpheroidPoint make_spheroid_point(cd u, cd v, double tol) {
    double n = std::sqrt(std::norm(u) + std::norm(v));
    if (!std::isfinite(n) || std::abs(n - 1.0) > tol)
        throw ConstraintViolation("SpheroidPoint: |u|^2+|v|^2 must be 1");
    return SpheroidPoint{u, v};
}

SpheroidPoint spheroid_project(const StiefelPoint& p, const CoordinateFrame& f) {
    validate_frame(f);
    cd a = p[f.ob_axis], b = p[f.lf_axis];
    double n = std::sqrt(std::norm(a) + std::norm(b));
    if (n <= kBindingTol)
        throw DegenerateProjection("spheroid_project: both frame coordinates vanish");
    return SpheroidPoint{a / n, b / n};
}

}  // namespace shadowlab
