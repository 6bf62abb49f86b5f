#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "logrs/errors.hpp"
#include "logrs/poly.hpp"

namespace logrs {

/// Entire function F(z) = base_value + integral from base_point to z of
/// Q(t) exp(P(t)) dt. F is the chart map of the log-Riemann surface the
/// toolkit works on; everything in the library evaluates F through this
/// record.
struct PQForm {
    CPoly P;
    CPoly Q = CPoly::constant(cxd{1.0, 0.0});
    cxd base_point{0.0, 0.0};
    cxd base_value{0.0, 0.0};
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int panel_budget = 10000;
};

namespace detail {

// Gauss 7 / Kronrod 15 panel rule (nodes descending, positive half).
inline constexpr double kGK15Nodes[8] = {
    0.99145537112081263920685469752633, 0.94910791234275852452618968404785,
    0.86486442335976907278971278864093, 0.74153118559939443986386477328079,
    0.58608723546769113029414483825873, 0.40584515137739716690660641207696,
    0.20778495500789846760068940377324, 0.0};
inline constexpr double kK15Weights[8] = {
    0.02293532201052922496373200805897, 0.06309209262997855329070066318920,
    0.10479001032225018383987632254152, 0.14065325971552591874518959051024,
    0.16900472663926790282658342659855, 0.19035057806478540991325640242101,
    0.20443294007529889241416199923465, 0.20948214108472782801299917489171};
inline constexpr double kG7Weights[4] = {
    0.12948496616886969327061143267908, 0.27970539148927666790146777142378,
    0.38183005050511894495036977548898, 0.41795918367346938775510204081633};

inline cxd pq_integrand(const PQForm& f, cxd z) {
    cxd p = f.P.eval(z);
    if (p.real() > 700.0)
        throw QuadratureFailure("pq_eval: exp(P) overflows along the path; re-path or rescale");
    return f.Q.eval(z) * std::exp(p);
}

struct PanelResult {
    cxd integral;
    double error;
};

inline PanelResult gk15_panel(const PQForm& f, cxd a, cxd b) {
    const cxd mid = 0.5 * (a + b);
    const cxd half = 0.5 * (b - a);
    cxd k15{0.0, 0.0}, g7{0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        cxd offset = half * kGK15Nodes[i];
        cxd val = (i == 7) ? pq_integrand(f, mid)
                           : pq_integrand(f, mid + offset) + pq_integrand(f, mid - offset);
        k15 += kK15Weights[i] * val;
        if (i % 2 == 1) g7 += kG7Weights[i / 2] * val;  // odd indices are the Gauss nodes
    }
    k15 *= half;
    g7 *= half;
    return {k15, std::abs(k15 - g7)};
}

/// Kahan-compensated accumulation of complex values.
struct CompensatedSum {
    cxd sum{0.0, 0.0};
    cxd carry{0.0, 0.0};
    void add(cxd v) {
        cxd y = v - carry;
        cxd t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace detail

/// Integral of Q exp(P) along the straight segment [a, b], adaptive to
/// abs_tol. Throws QuadratureFailure when the panel budget runs out.
inline cxd pq_integrate_segment(const PQForm& f, cxd a, cxd b,
                                const QuadratureOptions& opts = {}) {
    if (a == b) return cxd{0.0, 0.0};
    struct Item {
        cxd a, b;
        double tol;
    };
    std::vector<Item> stack{{a, b, opts.abs_tol}};
    detail::CompensatedSum acc;
    int panels = 0;
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        if (++panels > opts.panel_budget)
            throw QuadratureFailure("pq_eval: panel budget exhausted before tolerance was met");
        auto r = detail::gk15_panel(f, it.a, it.b);
        // Noise floor: once the estimate sits at rounding level relative to
        // the panel value, further splitting cannot help.
        bool at_noise = r.error <= 1e-14 * std::abs(r.integral);
        if (r.error <= it.tol || at_noise || std::abs(it.b - it.a) < 1e-15 * (1.0 + std::abs(it.a))) {
            acc.add(r.integral);
        } else {
            cxd mid = 0.5 * (it.a + it.b);
            stack.push_back({it.a, mid, it.tol * 0.5});
            stack.push_back({mid, it.b, it.tol * 0.5});
        }
    }
    return acc.sum;
}

/// F(z) along an optional polyline path (default: straight segment from the
/// base point). The path must start at f.base_point and end at z.
inline cxd pq_eval(const PQForm& f, cxd z, const std::vector<cxd>& path = {},
                   const QuadratureOptions& opts = {}) {
    if (f.Q.is_zero()) throw Error("pq_eval: Q must not be identically zero");
    std::vector<cxd> pts = path.empty() ? std::vector<cxd>{f.base_point, z} : path;
    if (pts.front() != f.base_point || pts.back() != z)
        throw Error("pq_eval: path must run from the base point to z");
    detail::CompensatedSum acc;
    acc.add(f.base_value);
    double total_len = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total_len += std::abs(pts[i + 1] - pts[i]);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double frac = total_len > 0.0 ? std::abs(pts[i + 1] - pts[i]) / total_len : 1.0;
        QuadratureOptions seg = opts;
        seg.abs_tol = opts.abs_tol * std::max(frac, 0.1);
        acc.add(pq_integrate_segment(f, pts[i], pts[i + 1], seg));
    }
    return acc.sum;
}

/// (F'(z), F''(z)) evaluated from the symbolic forms Q e^P and
/// (Q' + Q P') e^P.
inline std::pair<cxd, cxd> pq_derivatives(const PQForm& f, cxd z) {
    cxd e = std::exp(f.P.eval(z));
    cxd first = f.Q.eval(z) * e;
    cxd second = (f.Q.derivative().eval(z) + f.Q.eval(z) * f.P.derivative().eval(z)) * e;
    return {first, second};
}

/// Polynomial F_n with F_n' = Q (1 + P/n)^n and F_n(base_point) = base_value,
/// expanded and integrated termwise.
inline CPoly approximant(const PQForm& f, int n) {
    if (n < 1) throw Error("approximant: n must be >= 1");
    CPoly factor = CPoly::constant(cxd{1.0, 0.0}) + f.P * cxd{1.0 / n, 0.0};
    CPoly integrand = f.Q * factor.pow(static_cast<unsigned>(n));
    CPoly anti = integrand.antiderivative();
    cxd shift = f.base_value - anti.eval(f.base_point);
    return anti + CPoly::constant(shift);
}

/// Taylor stepping engine for F. Holds the derivative chain
/// A_0 = Q, A_{k+1} = A_k' + A_k P', so that F^{(k+1)} = A_k e^P and
/// an increment of F over a short hop can be summed to machine precision
/// without re-running quadrature.
class PQTaylor {
  public:
    explicit PQTaylor(const PQForm& f, int max_terms = 36) : form_(f) {
        chain_.reserve(static_cast<std::size_t>(max_terms));
        chain_.push_back(f.Q);
        CPoly dp = f.P.derivative();
        for (int k = 1; k < max_terms; ++k)
            chain_.push_back(chain_.back().derivative() + chain_.back() * dp);
    }

    const PQForm& form() const { return form_; }

    cxd fprime(cxd w) const { return form_.Q.eval(w) * std::exp(form_.P.eval(w)); }

    /// F(w + delta) - F(w), or nullopt when the truncated series has not
    /// converged (caller shortens the hop).
    std::optional<cxd> increment(cxd w, cxd delta) const {
        cxd p = form_.P.eval(w);
        if (p.real() > 700.0) return std::nullopt;
        cxd eP = std::exp(p);
        detail::CompensatedSum acc;
        cxd power = delta;  // delta^{k+1} / (k+1)!
        double tail = 0.0;
        for (std::size_t k = 0; k < chain_.size(); ++k) {
            cxd term = chain_[k].eval(w) * power;
            acc.add(term);
            tail = std::abs(term);
            if (tail <= 1e-16 * (1.0 + std::abs(acc.sum)) && k >= 2) return eP * acc.sum;
            power *= delta / static_cast<double>(k + 2);
        }
        return std::nullopt;
    }

  private:
    PQForm form_;
    std::vector<CPoly> chain_;
};

/// A critical point of F: a root of Q with its multiplicity and image under F.
struct CriticalPoint {
    cxd location;
    int multiplicity = 1;
    cxd value;
};

inline std::vector<CriticalPoint> critical_points(const PQForm& f,
                                                  const QuadratureOptions& opts = {}) {
    std::vector<CriticalPoint> out;
    if (f.Q.degree() < 1) return out;
    RootList roots = poly_roots(f.Q);
    out.reserve(roots.entries.size());
    for (const auto& e : roots.entries)
        out.push_back({e.location, e.multiplicity, pq_eval(f, e.location, {}, opts)});
    return out;
}

/// Directions along which Re P drops fastest: with a the leading coefficient
/// of P and d its degree, the d sector bisectors solve arg(a) + d*theta = pi.
inline std::vector<double> asymptotic_directions(const CPoly& P) {
    std::vector<double> thetas;
    int d = P.degree();
    if (d < 1 || P.is_zero()) return thetas;
    double base = (M_PI - std::arg(P.leading())) / d;
    for (int j = 0; j < d; ++j) {
        double t = base + 2.0 * M_PI * j / d;
        while (t > M_PI) t -= 2.0 * M_PI;
        while (t <= -M_PI) t += 2.0 * M_PI;
        thetas.push_back(t);
    }
    std::sort(thetas.begin(), thetas.end());
    return thetas;
}

struct AsymptoticValue {
    double theta;     // sector bisector direction
    cxd value;        // limit of F along the sector
    double tail_bound;
};

/// Asymptotic values of F, one per sector of steepest descent of Re P.
/// Integrates out to the given radius (auto-grown until Re P < -30), then
/// keeps doubling the reach until the increment is negligible; the last
/// increment bounds the discarded tail.
inline std::vector<AsymptoticValue> asymptotic_values(const PQForm& f, double radius = 0.0,
                                                      const QuadratureOptions& opts = {}) {
    std::vector<AsymptoticValue> out;
    for (double theta : asymptotic_directions(f.P)) {
        cxd dir{std::cos(theta), std::sin(theta)};
        double r = radius > 0.0 ? radius : 1.0;
        int grow = 0;
        while (f.P.eval(r * dir).real() > -30.0) {
            r *= 2.0;
            if (++grow > 60)
                throw TailNotConverged("asymptotic_values: Re P does not reach -30 along sector");
        }
        detail::CompensatedSum acc;
        acc.add(pq_eval(f, r * dir, {}, opts));
        double tail = std::abs(detail::pq_integrand(f, r * dir)) * r;
        int ext = 0;
        while (tail > 1e-12) {
            cxd inc = pq_integrate_segment(f, r * dir, 2.0 * r * dir, opts);
            acc.add(inc);
            r *= 2.0;
            tail = std::abs(inc);
            if (++ext > 20)
                throw TailNotConverged("asymptotic_values: tail bound stuck above tolerance");
        }
        out.push_back({theta, acc.sum, std::max(tail, 1e-16)});
    }
    return out;
}

}  // namespace logrs
