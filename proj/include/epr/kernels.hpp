#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "epr/numerics.hpp"
#include "epr/vec2.hpp"

namespace epr {

enum class SingularityClass { bounded, logarithmic };

/// Radial smoothing profile h_r(k), k >= 0, normalized so that
/// the radial mass int_0^inf k h_r(k) dk equals 1.  The full-plane smoothing
/// function at regularization length eps is x -> h_r(|x|/eps) / (2 pi eps^2).
struct KernelProfile {
    std::string name;
    std::function<double(double)> h;
    SingularityClass singularity = SingularityClass::bounded;
    double radial_mass = 0.0;          // int_0^inf k h dk, should be 1
    double first_radial_moment = 0.0;  // int_0^inf k^2 |h| dk
    bool nonnegative = true;
    // radius beyond which h is identically zero; +inf for unbounded support
    double support_radius = kInfinity;
};

/// Built-in profiles.  blob: h_r(k) = 2/(k^2+1)^2 (bounded, algebraic decay).
/// alpha: h_r(k) = K0(k) (log singularity at 0, exponential decay).
KernelProfile blob_profile();
KernelProfile alpha_profile();

/// Load a two-column CSV (k, h_r(k)).  The radial mass is checked against 1
/// at load; the singularity class is classified heuristically from the
/// behavior of the leading samples.
KernelProfile profile_from_csv(const std::string& path, double normalization_tol = 1e-6);

/// Grid controls for build_shape.  r_max <= 0 selects an automatic radius
/// with tail mass below tail_target.
struct ShapeGrid {
    int nodes = 2048;
    double r_split = 1.0;  // linear spacing below, log spacing above
    double r_max = 0.0;
    double tail_target = 1e-10;
    double normalization_tol = 1e-6;
};

/// The singular Biot-Savart kernel K(x) = -(1/2pi) x_perp / |x|^2.
/// Throws std::domain_error at x = 0.
Vec2 singular_kernel(Vec2 x);

/// Shape function of the vortex-blob regularization: r^2/(r^2+1).
double blob_shape(double r);

/// Shape function of the Euler-alpha regularization: 1 - r K1(r), 0 at r = 0.
double alpha_shape(double r);

/// Quasi-Lipschitz modulus: r(1 - log r) for r < 1, 1 otherwise.
double quasi_lipschitz_modulus(double r);

/// Regularized Biot-Savart kernel K_h(x) = K(x) * S(|x|/eps) where S is the
/// shape function of a radial smoothing profile.  Built either from closed
/// forms (built-ins) or from a quadrature table (generic profiles).
/// Immutable after construction; safe to share across threads.
class ShapeTable {
public:
    enum class Kind { exact, blob, alpha, tabulated };

    Kind kind() const { return kind_; }
    double epsilon() const { return epsilon_; }
    double tail_radius() const { return tail_radius_; }
    SingularityClass singularity() const { return singularity_; }
    const KernelProfile* profile() const { return profile_.get(); }
    /// int k^2 |h| dk of the underlying profile (0 for the exact kernel).
    double first_radial_moment() const { return moment_; }
    bool nonnegative_profile() const { return nonnegative_; }

    /// Shape function S(s) at scaled radius s = r/eps.  S(0) = 0, S -> 1.
    double shape_function(double s) const;

    /// S(sqrt(r2)/eps) / r2, the scalar factor of the kernel.  r2 > 0.
    double kernel_coefficient(double r2) const;

    /// K_h(x); exactly (0,0) at x = 0 for every kind.
    Vec2 kernel(Vec2 x) const;

    /// Radial stream function G_eps(r) = G1(r/eps) - log(eps)/(2 pi).
    double stream(double r) const;

    /// Unit-eps stream function G1(s).
    double stream_unit(double s) const;

    /// Same shape with a different regularization length (tables shared).
    ShapeTable with_epsilon(double epsilon) const;

    friend ShapeTable make_shape(const std::string&, double);
    friend ShapeTable build_shape(const KernelProfile&, double, const ShapeGrid&);

private:
    ShapeTable() = default;

    struct Tables {
        RadialTable g;        // shape function S on the grid
        RadialTable s1;       // unit stream function G1 on the grid
        double r1 = 0.0;      // first nonzero node
        double g_r1 = 0.0;    // S(r1)
        double s1_r1 = 0.0;   // G1(r1)
    };

    Kind kind_ = Kind::exact;
    double epsilon_ = 1.0;
    double tail_radius_ = 0.0;
    SingularityClass singularity_ = SingularityClass::bounded;
    double moment_ = 0.0;
    bool nonnegative_ = true;
    std::shared_ptr<const KernelProfile> profile_;
    std::shared_ptr<const Tables> tables_;
};

/// Construct a built-in shape by name: "blob", "alpha" or "exact".
/// Built-ins evaluate their closed forms; "exact" is the degenerate S == 1
/// kernel (singular at 0 -- callers must exclude self-interaction).
ShapeTable make_shape(const std::string& name, double epsilon);

/// Build the shape table of an arbitrary normalized profile by adaptive
/// quadrature of S(r) = int_0^r k h_r(k) dk, and the stream function by
/// integrating dG1/dr = -S(r)/(2 pi r) inward from the log asymptote.
/// Throws NormalizationError if |S(r_max) + tail - 1| exceeds tolerance.
ShapeTable build_shape(const KernelProfile& profile, double epsilon, const ShapeGrid& grid = {});

struct L1Distance {
    double value = 0.0;  // eps * int_0^inf |S(r) - 1| dr
    double bound = 0.0;  // eps * int_0^inf k^2 |h| dk
    bool within_bound = true;
};

/// L1 distance between the regularized and singular kernels, evaluated at an
/// explicit regularization length (the table itself is eps-independent).
L1Distance l1_kernel_distance(const ShapeTable& shape, double epsilon);

struct KernelLemmaSpec {
    int samples = 4096;       // points for the boundedness scan
    int pairs = 10000;        // pairs for the quasi-Lipschitz constant
    double radius_lo = 0.05;  // in units of eps
    double radius_hi = 10.0;
    std::vector<double> decay_radii = {1e3};  // in units of eps
    std::uint64_t seed = 12345;
};

struct KernelLemmaReport {
    double max_abs_kernel = 0.0;
    struct Decay {
        double radius;     // |x| in units of eps
        double value;      // |x| |K_h(x)|
        double deviation;  // |value - 1/(2 pi)|
    };
    std::vector<Decay> decay;
    double ql_constant = 0.0;          // over `pairs` samples
    double ql_constant_doubled = 0.0;  // over 2*`pairs` samples (nested)
    double ql_rel_change = 0.0;
    int pairs = 0;
    std::uint64_t seed = 0;

    std::string to_json() const;
};

/// Numerical checks of the kernel estimates: uniform boundedness, the
/// far-field limit |x||K_h| -> 1/(2 pi), and an empirical quasi-Lipschitz
/// constant max |K_h(x)-K_h(x')| / phi(|x-x'|) over seeded random pairs.
KernelLemmaReport verify_kernel_lemmas(const ShapeTable& shape, const KernelLemmaSpec& spec = {});

} // namespace epr
