#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "logrs/errors.hpp"

namespace logrs {

using cxd = std::complex<double>;

/// Univariate polynomial with complex coefficients stored in ascending
/// degree. Trailing zeros are stripped, so the leading coefficient is
/// nonzero unless the polynomial is identically zero.
class CPoly {
  public:
    CPoly() : coeffs_{cxd{0.0, 0.0}} {}

    explicit CPoly(std::vector<cxd> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(cxd{0.0, 0.0});
        trim();
    }

    CPoly(std::initializer_list<cxd> coeffs) : CPoly(std::vector<cxd>(coeffs)) {}

    static CPoly constant(cxd c) { return CPoly{std::vector<cxd>{c}}; }

    /// Monomial c * z^k.
    static CPoly monomial(cxd c, int k) {
        std::vector<cxd> v(static_cast<std::size_t>(k) + 1, cxd{0.0, 0.0});
        v.back() = c;
        return CPoly{std::move(v)};
    }

    /// lead * prod (z - r_i), repeated entries giving multiple roots.
    static CPoly from_roots(const std::vector<cxd>& roots, cxd lead = cxd{1.0, 0.0}) {
        CPoly p = constant(lead);
        for (cxd r : roots) p = p * CPoly{{-r, cxd{1.0, 0.0}}};
        return p;
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == cxd{0.0, 0.0}; }
    const std::vector<cxd>& coeffs() const { return coeffs_; }

    cxd coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(coeffs_.size())) return cxd{0.0, 0.0};
        return coeffs_[static_cast<std::size_t>(k)];
    }

    cxd leading() const { return coeffs_.back(); }

    /// Horner evaluation.
    cxd eval(cxd z) const {
        cxd acc = coeffs_.back();
        for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    CPoly derivative() const {
        if (coeffs_.size() == 1) return CPoly{};
        std::vector<cxd> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            d[k - 1] = coeffs_[k] * static_cast<double>(k);
        return CPoly{std::move(d)};
    }

    /// Antiderivative with zero constant term.
    CPoly antiderivative() const {
        std::vector<cxd> a(coeffs_.size() + 1, cxd{0.0, 0.0});
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            a[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
        return CPoly{std::move(a)};
    }

    CPoly operator-() const {
        std::vector<cxd> v(coeffs_);
        for (auto& c : v) c = -c;
        return CPoly{std::move(v)};
    }

    friend CPoly operator+(const CPoly& a, const CPoly& b) {
        std::vector<cxd> v(std::max(a.coeffs_.size(), b.coeffs_.size()), cxd{0.0, 0.0});
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
        return CPoly{std::move(v)};
    }

    friend CPoly operator-(const CPoly& a, const CPoly& b) { return a + (-b); }

    friend CPoly operator*(const CPoly& a, const CPoly& b) {
        if (a.is_zero() || b.is_zero()) return CPoly{};
        std::vector<cxd> v(a.coeffs_.size() + b.coeffs_.size() - 1, cxd{0.0, 0.0});
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                v[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return CPoly{std::move(v)};
    }

    friend CPoly operator*(const CPoly& a, cxd s) {
        std::vector<cxd> v(a.coeffs_);
        for (auto& c : v) c *= s;
        return CPoly{std::move(v)};
    }

    friend CPoly operator*(cxd s, const CPoly& a) { return a * s; }

    friend CPoly operator+(const CPoly& a, cxd s) { return a + constant(s); }
    friend CPoly operator+(cxd s, const CPoly& a) { return a + s; }

    /// Binary exponentiation; throws OverflowGuard when coefficients leave
    /// the double range.
    CPoly pow(unsigned n) const {
        CPoly acc = constant(cxd{1.0, 0.0});
        CPoly base = *this;
        while (n > 0) {
            if (n & 1u) {
                acc = acc * base;
                acc.check_finite();
            }
            n >>= 1u;
            if (n > 0) {
                base = base * base;
                base.check_finite();
            }
        }
        return acc;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (cxd c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    bool operator==(const CPoly& other) const { return coeffs_ == other.coeffs_; }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (k) os << ", ";
            os << coeffs_[k].real() << (coeffs_[k].imag() < 0 ? "-" : "+")
               << std::abs(coeffs_[k].imag()) << "i";
        }
        os << "]";
        return os.str();
    }

  private:
    void trim() {
        while (coeffs_.size() > 1 && coeffs_.back() == cxd{0.0, 0.0}) coeffs_.pop_back();
    }

    void check_finite() const {
        for (cxd c : coeffs_)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw OverflowGuard("polynomial coefficients overflowed during expansion");
    }

    std::vector<cxd> coeffs_;
};

struct RootEntry {
    cxd location;
    int multiplicity = 1;
};

struct RootList {
    std::vector<RootEntry> entries;

    int total_multiplicity() const {
        int s = 0;
        for (const auto& e : entries) s += e.multiplicity;
        return s;
    }
};

namespace detail {

/// Residual bound a certified root must satisfy (matched by tests).
inline double root_residual_bound(const CPoly& p, cxd z) {
    return 1e-9 * (1.0 + p.max_abs_coeff()) * std::pow(std::max(1.0, std::abs(z)), p.degree());
}

/// Aberth-Ehrlich simultaneous iteration on a polynomial with nonzero
/// constant term. Returns degree() approximations; multiple roots come back
/// as loose clusters that the caller resolves.
inline std::vector<cxd> aberth(const CPoly& p) {
    const int n = p.degree();
    const CPoly dp = p.derivative();

    double radius = 0.0;
    for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(p.coeff(k) / p.leading()));
    radius = 1.0 + radius;

    std::vector<cxd> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double ang = 2.0 * M_PI * k / n + 0.4;  // offset breaks symmetry lock
        z[static_cast<std::size_t>(k)] = radius * cxd{std::cos(ang), std::sin(ang)};
    }

    std::vector<bool> done(z.size(), false);
    for (int iter = 0; iter < 400; ++iter) {
        double max_step = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (done[k]) continue;
            cxd pv = p.eval(z[k]);
            if (pv == cxd{0.0, 0.0}) {
                done[k] = true;
                continue;
            }
            cxd dv = dp.eval(z[k]);
            if (dv == cxd{0.0, 0.0}) {
                z[k] += 1e-8 * (1.0 + std::abs(z[k]));
                continue;
            }
            cxd newton = pv / dv;
            cxd sum{0.0, 0.0};
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (j == k) continue;
                cxd diff = z[k] - z[j];
                if (diff == cxd{0.0, 0.0}) diff = cxd{1e-12 * (1.0 + std::abs(z[k])), 0.0};
                sum += 1.0 / diff;
            }
            cxd denom = 1.0 - newton * sum;
            cxd step = (denom == cxd{0.0, 0.0}) ? newton : newton / denom;
            z[k] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[k])));
        }
        if (max_step < 1e-15) break;
    }
    return z;
}

/// Newton refinement of a simple root of q starting at z0.
inline cxd newton_polish(const CPoly& q, cxd z0) {
    const CPoly dq = q.derivative();
    cxd z = z0;
    for (int it = 0; it < 80; ++it) {
        cxd f = q.eval(z);
        cxd d = dq.eval(z);
        if (d == cxd{0.0, 0.0}) break;
        cxd step = f / d;
        z -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(z))) break;
    }
    return z;
}

}  // namespace detail

/// All roots of p with multiplicities. Multiplicity detection polishes each
/// tentative cluster against the derivative chain: an m-fold root is a simple
/// root of the (m-1)-th derivative, which restores full accuracy that raw
/// simultaneous iteration loses on multiple roots. The final clustering
/// radius is 1e-6*(1+|z|).
inline RootList poly_roots(const CPoly& p) {
    if (p.degree() < 1)
        throw DegreeZeroError("poly_roots: polynomial is constant");

    // Exact zero roots deflate symbolically.
    int zero_mult = 0;
    std::vector<cxd> c = p.coeffs();
    while (zero_mult < static_cast<int>(c.size()) - 1 && c[static_cast<std::size_t>(zero_mult)] == cxd{0.0, 0.0})
        ++zero_mult;
    std::vector<cxd> reduced(c.begin() + zero_mult, c.end());
    CPoly q{std::move(reduced)};

    RootList out;
    if (zero_mult > 0) out.entries.push_back({cxd{0.0, 0.0}, zero_mult});
    if (q.degree() == 0) return out;

    // Precompute the derivative chain for multiplicity certification.
    std::vector<CPoly> deriv{q};
    for (int k = 0; k < q.degree(); ++k) deriv.push_back(deriv.back().derivative());

    std::vector<cxd> raw = detail::aberth(q);
    std::vector<bool> used(raw.size(), false);
    bool ill_conditioned = false;

    std::size_t remaining = raw.size();
    while (remaining > 0) {
        std::size_t seed = 0;
        while (used[seed]) ++seed;

        bool accepted = false;
        for (int m = static_cast<int>(remaining); m >= 1 && !accepted; --m) {
            // m nearest unused approximations to the seed.
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < raw.size(); ++j)
                if (!used[j]) idx.push_back(j);
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(raw[a] - raw[seed]) < std::abs(raw[b] - raw[seed]);
            });
            idx.resize(static_cast<std::size_t>(m));

            cxd centroid{0.0, 0.0};
            for (std::size_t j : idx) centroid += raw[j];
            centroid /= static_cast<double>(m);

            // Raw approximations of an m-fold root scatter like eps^(1/m);
            // only clusters within that allowance are worth certifying.
            double allowance = (m == 1)
                ? 1e-6 * (1.0 + std::abs(centroid))
                : 20.0 * std::pow(1e-14, 1.0 / m) * (1.0 + std::abs(centroid));
            double spread = 0.0;
            for (std::size_t j : idx) spread = std::max(spread, std::abs(raw[j] - centroid));
            if (spread > allowance) continue;

            cxd polished = detail::newton_polish(deriv[static_cast<std::size_t>(m - 1)], centroid);
            if (!std::isfinite(polished.real()) || !std::isfinite(polished.imag())) continue;

            // Certify: p and its first m-1 derivatives vanish, the m-th does not.
            bool ok = std::abs(q.eval(polished)) <= detail::root_residual_bound(q, polished);
            for (int j = 1; j < m && ok; ++j) {
                double scale = (1.0 + deriv[static_cast<std::size_t>(j)].max_abs_coeff()) *
                               std::pow(std::max(1.0, std::abs(polished)), q.degree() - j);
                ok = std::abs(deriv[static_cast<std::size_t>(j)].eval(polished)) <= 1e-7 * scale;
            }
            if (ok && m < q.degree()) {
                double scale = (1.0 + deriv[static_cast<std::size_t>(m)].max_abs_coeff()) *
                               std::pow(std::max(1.0, std::abs(polished)), q.degree() - m);
                ok = std::abs(deriv[static_cast<std::size_t>(m)].eval(polished)) > 1e-5 * scale;
            }
            for (std::size_t j : idx) {
                if (!ok) break;
                ok = std::abs(raw[j] - polished) <= std::max(allowance, 1e-6 * (1.0 + std::abs(polished)));
            }
            if (!ok) continue;

            out.entries.push_back({polished, m});
            for (std::size_t j : idx) used[j] = true;
            remaining -= static_cast<std::size_t>(m);
            accepted = true;
        }

        if (!accepted) {
            // Keep the raw value as a simple root so the count stays right,
            // but remember that certification failed.
            cxd polished = detail::newton_polish(q, raw[seed]);
            if (std::abs(q.eval(polished)) > detail::root_residual_bound(q, polished))
                ill_conditioned = true;
            out.entries.push_back({polished, 1});
            used[seed] = true;
            --remaining;
        }
    }

    // Final merge at the declared clustering radius.
    std::vector<RootEntry> merged;
    for (const auto& e : out.entries) {
        bool joined = false;
        for (auto& f : merged) {
            if (std::abs(e.location - f.location) <= 1e-6 * (1.0 + std::abs(f.location))) {
                f.multiplicity += e.multiplicity;
                joined = true;
                break;
            }
        }
        if (!joined) merged.push_back(e);
    }
    out.entries = std::move(merged);

    std::sort(out.entries.begin(), out.entries.end(), [](const RootEntry& a, const RootEntry& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });

    if (ill_conditioned)
        throw IllConditionedError("poly_roots: residual test failed after iteration budget");
    return out;
}

}  // namespace logrs
