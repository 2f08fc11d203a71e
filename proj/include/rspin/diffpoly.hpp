#pragma once

// Differential polynomials in the jet variables u_m^(k), m = 0..r-2, over the
// scalar ring.  The variables commute; the noncommutative structure lives in
// psido.hpp.

#include "rspin/scalar.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rspin {

struct JetVariable {
    int m = 0; // field index
    int k = 0; // derivative order

    auto operator<=>(const JetVariable&) const = default;

    /// u<m> for k = 0, u<m>_<k> otherwise.
    std::string str() const
    {
        std::string out = "u" + std::to_string(m);
        if (k > 0)
            out += "_" + std::to_string(k);
        return out;
    }

    JetVariable derivative() const { return {m, k + 1}; }
};

/// A monomial: its factors sorted by variable, exponents strictly positive.
class Monomial {
public:
    using Factor = std::pair<JetVariable, unsigned>;

    Monomial() = default;
    explicit Monomial(JetVariable v, unsigned e = 1)
    {
        if (e > 0)
            factors_.emplace_back(v, e);
    }

    const std::vector<Factor>& factors() const { return factors_; }
    bool empty() const { return factors_.empty(); }

    unsigned degree() const
    {
        unsigned d = 0;
        for (const auto& f : factors_)
            d += f.second;
        return d;
    }

    unsigned exponent(JetVariable v) const
    {
        auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                                   [](const Factor& f, JetVariable x) { return f.first < x; });
        return (it != factors_.end() && it->first == v) ? it->second : 0U;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b)
    {
        Monomial out;
        out.factors_.reserve(a.factors_.size() + b.factors_.size());
        auto i = a.factors_.begin();
        auto j = b.factors_.begin();
        while (i != a.factors_.end() || j != b.factors_.end()) {
            if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first))
                out.factors_.push_back(*i++);
            else if (i == a.factors_.end() || j->first < i->first)
                out.factors_.push_back(*j++);
            else {
                out.factors_.emplace_back(i->first, i->second + j->second);
                ++i;
                ++j;
            }
        }
        return out;
    }

    /// Returns this monomial with the exponent of v changed by delta (which must not go negative).
    Monomial with_exponent_shift(JetVariable v, int delta) const
    {
        Monomial out = *this;
        auto it = std::lower_bound(out.factors_.begin(), out.factors_.end(), v,
                                   [](const Factor& f, JetVariable x) { return f.first < x; });
        if (it != out.factors_.end() && it->first == v) {
            const int e = static_cast<int>(it->second) + delta;
            if (e < 0)
                throw Error("negative exponent for " + v.str());
            if (e == 0)
                out.factors_.erase(it);
            else
                it->second = static_cast<unsigned>(e);
        } else {
            if (delta < 0)
                throw Error("negative exponent for " + v.str());
            if (delta > 0)
                out.factors_.insert(it, Factor{v, static_cast<unsigned>(delta)});
        }
        return out;
    }

    friend bool operator==(const Monomial&, const Monomial&) = default;

    std::string str() const
    {
        std::string out;
        for (const auto& [v, e] : factors_) {
            if (!out.empty())
                out += "*";
            out += v.str();
            if (e > 1)
                out += "^" + std::to_string(e);
        }
        return out;
    }

private:
    std::vector<Factor> factors_;
};

/// Degree first, then lexicographic on the sorted factor list.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const
    {
        const unsigned da = a.degree();
        const unsigned db = b.degree();
        if (da != db)
            return da < db;
        return a.factors() < b.factors();
    }
};

class DiffPolynomial {
public:
    using Terms = std::map<Monomial, Scalar, MonomialOrder>;

    explicit DiffPolynomial(int r = 2) : r_(r)
    {
        if (r < 2)
            throw Error("differential polynomials need r >= 2, got " + std::to_string(r));
    }

    static DiffPolynomial constant(const Scalar& c)
    {
        DiffPolynomial p(c.r());
        p.add_term(Monomial{}, c);
        return p;
    }

    static DiffPolynomial constant(int r, const Rational& c) { return constant(Scalar::rational(r, c)); }

    /// The jet variable u_m^(k); requires 0 <= m <= r-2 and k >= 0.
    static DiffPolynomial variable(int r, int m, int k = 0)
    {
        DiffPolynomial p(r);
        if (m < 0 || m > r - 2)
            throw Error("jet variable u" + std::to_string(m) + " outside 0..r-2 for r=" +
                        std::to_string(r));
        if (k < 0)
            throw Error("negative derivative order for u" + std::to_string(m));
        p.add_term(Monomial(JetVariable{m, k}), Scalar::rational(r, 1));
        return p;
    }

    int r() const { return r_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }

    Scalar coefficient(const Monomial& mono) const
    {
        auto it = terms_.find(mono);
        return it == terms_.end() ? Scalar::rational(r_, 0) : it->second;
    }

    /// Adds c * mono in place, dropping the entry if it cancels.
    void add_term(const Monomial& mono, const Scalar& c)
    {
        if (c.r() != r_)
            throw Error("mixed r contexts in differential polynomial");
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.try_emplace(mono, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    friend bool operator==(const DiffPolynomial& a, const DiffPolynomial& b)
    {
        return a.r_ == b.r_ && a.terms_ == b.terms_;
    }

    DiffPolynomial operator-() const
    {
        DiffPolynomial out(r_);
        for (const auto& [mono, c] : terms_)
            out.terms_.emplace_hint(out.terms_.end(), mono, -c);
        return out;
    }

    DiffPolynomial& operator+=(const DiffPolynomial& q)
    {
        check_same(q);
        for (const auto& [mono, c] : q.terms_)
            add_term(mono, c);
        return *this;
    }

    DiffPolynomial& operator-=(const DiffPolynomial& q)
    {
        check_same(q);
        for (const auto& [mono, c] : q.terms_)
            add_term(mono, -c);
        return *this;
    }

    DiffPolynomial& operator*=(const Scalar& c)
    {
        if (c.r() != r_)
            throw Error("mixed r contexts in differential polynomial");
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [mono, coef] : terms_)
            coef *= c;
        return *this;
    }

    friend DiffPolynomial operator+(DiffPolynomial p, const DiffPolynomial& q) { return p += q; }
    friend DiffPolynomial operator-(DiffPolynomial p, const DiffPolynomial& q) { return p -= q; }
    friend DiffPolynomial operator*(DiffPolynomial p, const Scalar& c) { return p *= c; }
    friend DiffPolynomial operator*(const Scalar& c, DiffPolynomial p) { return p *= c; }

    friend DiffPolynomial operator*(const DiffPolynomial& p, const DiffPolynomial& q)
    {
        p.check_same(q);
        DiffPolynomial out(p.r_);
        for (const auto& [ma, ca] : p.terms_)
            for (const auto& [mb, cb] : q.terms_)
                out.add_term(ma * mb, ca * cb);
        return out;
    }

    /// Highest derivative order among the variables present, or -1 for constants.
    int max_order() const
    {
        int k = -1;
        for (const auto& [mono, c] : terms_)
            for (const auto& f : mono.factors())
                k = std::max(k, f.first.k);
        return k;
    }

    std::vector<JetVariable> variables() const
    {
        std::vector<JetVariable> out;
        for (const auto& [mono, c] : terms_)
            for (const auto& f : mono.factors())
                out.push_back(f.first);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Homogeneous component of the given total degree.
    DiffPolynomial component(unsigned degree) const
    {
        DiffPolynomial out(r_);
        for (const auto& [mono, c] : terms_)
            if (mono.degree() == degree)
                out.terms_.emplace_hint(out.terms_.end(), mono, c);
        return out;
    }

    /// Canonical rendering, e.g. "-1/24*u0_3 - 1/2*u0*u0_1".
    std::string str() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (const auto& [mono, c] : terms_) {
            std::string coef;
            bool negative = false;
            if (c.is_rational()) {
                negative = c.rational_part() < 0;
                const Rational mag = abs(c.rational_part());
                if (mag != 1 || mono.empty())
                    coef = to_string(mag);
            } else {
                coef = c.str();
            }
            std::string term = coef;
            if (!mono.empty())
                term += (coef.empty() ? "" : "*") + mono.str();
            if (first)
                out += (negative ? "-" : "") + term;
            else
                out += (negative ? " - " : " + ") + term;
            first = false;
        }
        return out;
    }

private:
    void check_same(const DiffPolynomial& q) const
    {
        if (q.r_ != r_)
            throw Error("mixed r contexts: r=" + std::to_string(r_) + " and r=" + std::to_string(q.r_));
    }

    int r_;
    Terms terms_;
};

/// d/dv of p for a single jet variable v.
inline DiffPolynomial partial_derivative(const DiffPolynomial& p, JetVariable v)
{
    DiffPolynomial out(p.r());
    for (const auto& [mono, c] : p.terms()) {
        const unsigned e = mono.exponent(v);
        if (e == 0)
            continue;
        out.add_term(mono.with_exponent_shift(v, -1), c * Rational(e));
    }
    return out;
}

/// Total x-derivative: Leibniz rule with u_m^(k) -> u_m^(k+1).
inline DiffPolynomial total_derivative(const DiffPolynomial& p)
{
    DiffPolynomial out(p.r());
    for (const auto& [mono, c] : p.terms()) {
        for (const auto& [v, e] : mono.factors()) {
            Monomial next = mono.with_exponent_shift(v, -1).with_exponent_shift(v.derivative(), 1);
            out.add_term(next, c * Rational(e));
        }
    }
    return out;
}

inline DiffPolynomial total_derivative(const DiffPolynomial& p, unsigned times)
{
    DiffPolynomial out = p;
    for (unsigned t = 0; t < times; ++t)
        out = total_derivative(out);
    return out;
}

using JetAssignment = std::map<JetVariable, Rational>;

/// Exact substitution of rational values for every jet variable occurring in p.
inline Scalar evaluate_at(const DiffPolynomial& p, const JetAssignment& assignment)
{
    Scalar total = Scalar::rational(p.r(), 0);
    for (const auto& [mono, c] : p.terms()) {
        Rational value(1);
        for (const auto& [v, e] : mono.factors()) {
            auto it = assignment.find(v);
            if (it == assignment.end())
                throw Error("evaluate_at: no value assigned to " + v.str());
            value *= rational_pow(it->second, e);
        }
        total += c * value;
    }
    return total;
}

/// The evolutionary derivation with characteristic K: u_m^(k) -> d^k K_m / dx^k.
/// Fields absent from K evolve trivially.
inline DiffPolynomial evolutionary_derivative(const DiffPolynomial& p,
                                              const std::map<int, DiffPolynomial>& K)
{
    DiffPolynomial out(p.r());
    for (const JetVariable& v : p.variables()) {
        auto it = K.find(v.m);
        if (it == K.end())
            continue;
        DiffPolynomial image = total_derivative(it->second, static_cast<unsigned>(v.k));
        out += partial_derivative(p, v) * image;
    }
    return out;
}

/// Formal x-antiderivative by the homotopy operator; nullopt when p is not a
/// total derivative of a differential polynomial.  The result is verified.
inline std::optional<DiffPolynomial> antiderivative(const DiffPolynomial& p)
{
    DiffPolynomial F(p.r());
    if (p.is_zero())
        return F;
    if (!p.coefficient(Monomial{}).is_zero())
        return std::nullopt;
    unsigned max_degree = 0;
    for (const auto& [mono, c] : p.terms())
        max_degree = std::max(max_degree, mono.degree());
    for (unsigned d = 1; d <= max_degree; ++d) {
        const DiffPolynomial pd = p.component(d);
        if (pd.is_zero())
            continue;
        DiffPolynomial Fd(p.r());
        for (const JetVariable& v : pd.variables()) {
            if (v.k == 0)
                continue;
            DiffPolynomial dp = partial_derivative(pd, v);
            // sum_{j<k} u^(j) * (-dx)^(k-1-j) (dp)
            for (int j = 0; j < v.k; ++j) {
                const int n = v.k - 1 - j;
                DiffPolynomial inner = total_derivative(dp, static_cast<unsigned>(n));
                if (n % 2 == 1)
                    inner = -inner;
                Fd += DiffPolynomial::variable(p.r(), v.m, j) * inner;
            }
        }
        F += Fd * Scalar::rational(p.r(), Rational(1, static_cast<long>(d)));
    }
    if (!(total_derivative(F) == p))
        return std::nullopt;
    return F;
}

} // namespace rspin
