#pragma once

// Truncated pseudodifferential operators sum_k p_k D^k over differential
// polynomials, with D = kappa * d/dx and kappa = i*s/r.
//
// Every operator carries a watermark: coefficients are certified for orders
// k >= watermark and unknown below it.  An exact operator has no watermark.
// Operations propagate the strongest watermark their inputs justify, and
// reading a coefficient below the watermark is an error.

#include "rspin/diffpoly.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace rspin {

class PseudoDiffOp {
public:
    using Coefficients = std::map<int, DiffPolynomial, std::greater<int>>;

    /// The zero operator, exact.
    explicit PseudoDiffOp(int r = 2) : r_(r)
    {
        if (r < 2)
            throw Error("pseudodifferential operators need r >= 2");
    }

    /// D^k, exact.
    static PseudoDiffOp D(int r, int k = 1)
    {
        return monomial(r, k, DiffPolynomial::constant(r, 1));
    }

    /// f * D^k, exact.
    static PseudoDiffOp monomial(int r, int k, const DiffPolynomial& f)
    {
        PseudoDiffOp out(r);
        out.add(k, f);
        return out;
    }

    static PseudoDiffOp identity(int r) { return D(r, 0); }

    int r() const { return r_; }
    bool is_exact() const { return !watermark_; }
    const std::optional<int>& watermark() const { return watermark_; }
    const Coefficients& coefficients() const { return coeffs_; }

    /// True when no certified coefficient is nonzero.
    bool is_zero() const { return coeffs_.empty(); }

    std::optional<int> top() const
    {
        if (coeffs_.empty())
            return std::nullopt;
        return coeffs_.begin()->first;
    }

    std::optional<int> lowest() const
    {
        if (coeffs_.empty())
            return std::nullopt;
        return coeffs_.rbegin()->first;
    }

    /// No certified coefficient at a negative order, and certified down to order 0.
    bool is_differential() const
    {
        if (watermark_ && *watermark_ > 0)
            return false;
        auto low = lowest();
        return !low || *low >= 0;
    }

    /// Coefficient of D^k; throws when k lies below the watermark.
    DiffPolynomial coefficient(int k) const
    {
        if (watermark_ && k < *watermark_)
            throw Error("coefficient of D^" + std::to_string(k) + " is below the watermark " +
                        std::to_string(*watermark_) + " and not certified");
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? DiffPolynomial(r_) : it->second;
    }

    void add(int k, const DiffPolynomial& f)
    {
        if (f.r() != r_)
            throw Error("mixed r contexts in pseudodifferential operator");
        if (watermark_ && k < *watermark_)
            return;
        if (f.is_zero())
            return;
        auto [it, inserted] = coeffs_.try_emplace(k, f);
        if (!inserted) {
            it->second += f;
            if (it->second.is_zero())
                coeffs_.erase(it);
        }
    }

    /// Lowers certainty to the given watermark, dropping coefficients below it.
    PseudoDiffOp truncated(int floor) const
    {
        PseudoDiffOp out = *this;
        out.set_watermark(watermark_ ? std::max(*watermark_, floor) : floor);
        return out;
    }

    friend bool operator==(const PseudoDiffOp& a, const PseudoDiffOp& b)
    {
        return a.r_ == b.r_ && a.watermark_ == b.watermark_ && a.coeffs_ == b.coeffs_;
    }

    PseudoDiffOp operator-() const
    {
        PseudoDiffOp out = *this;
        for (auto& [k, f] : out.coeffs_)
            f = -f;
        return out;
    }

    PseudoDiffOp& operator+=(const PseudoDiffOp& b)
    {
        check_same(b);
        set_watermark(combine_max(watermark_, b.watermark_));
        for (const auto& [k, f] : b.coeffs_)
            add(k, f);
        return *this;
    }

    PseudoDiffOp& operator-=(const PseudoDiffOp& b) { return *this += -b; }

    friend PseudoDiffOp operator+(PseudoDiffOp a, const PseudoDiffOp& b) { return a += b; }
    friend PseudoDiffOp operator-(PseudoDiffOp a, const PseudoDiffOp& b) { return a -= b; }

    /// Left multiplication by a scalar (scalars commute with D).
    friend PseudoDiffOp operator*(const Scalar& c, const PseudoDiffOp& a)
    {
        PseudoDiffOp out(a.r_);
        out.watermark_ = a.watermark_;
        for (const auto& [k, f] : a.coeffs_)
            out.add(k, f * c);
        return out;
    }

    /// Canonical rendering: "(<poly>)*D^<k>" terms in descending k, then
    /// " + O(D^<watermark-1>)" unless exact.
    std::string str() const
    {
        std::string out;
        for (const auto& [k, f] : coeffs_) {
            if (!out.empty())
                out += " + ";
            out += "(" + f.str() + ")*D^" + std::to_string(k);
        }
        if (watermark_) {
            if (!out.empty())
                out += " + ";
            out += "O(D^" + std::to_string(*watermark_ - 1) + ")";
        }
        return out.empty() ? "0" : out;
    }

private:
    friend PseudoDiffOp compose(const PseudoDiffOp&, const PseudoDiffOp&, std::optional<int>);

    static std::optional<int> combine_max(const std::optional<int>& a, const std::optional<int>& b)
    {
        if (!a)
            return b;
        if (!b)
            return a;
        return std::max(*a, *b);
    }

    void set_watermark(std::optional<int> w)
    {
        watermark_ = w;
        if (w)
            coeffs_.erase(coeffs_.upper_bound(*w), coeffs_.end());
    }

    void check_same(const PseudoDiffOp& b) const
    {
        if (b.r_ != r_)
            throw Error("mixed r contexts: r=" + std::to_string(r_) + " and r=" + std::to_string(b.r_));
    }

    int r_;
    Coefficients coeffs_;
    std::optional<int> watermark_;
};

namespace detail {

// Highest order an operator may reach, counting an uncertified tail.
inline std::optional<int> reach(const PseudoDiffOp& a)
{
    auto t = a.top();
    if (a.is_exact())
        return t;
    const int tail = *a.watermark() - 1;
    return t ? std::max(*t, tail) : tail;
}

} // namespace detail

/// A∘B by the generalized Leibniz rule D^k f = sum_j C(k,j) kappa^j f^(j) D^(k-j).
///
/// The result is certified down to max(reach(A) + wm(B), wm(A) + reach(B)),
/// raised to `floor` when given.  Composing exact operators whose expansion is
/// infinite (A has negative orders, B has nonconstant coefficients) needs a floor.
inline PseudoDiffOp compose(const PseudoDiffOp& A, const PseudoDiffOp& B,
                            std::optional<int> floor = std::nullopt)
{
    A.check_same(B);
    const int r = A.r();
    PseudoDiffOp out(r);

    if ((A.is_exact() && A.is_zero()) || (B.is_exact() && B.is_zero()))
        return floor ? out.truncated(*floor) : out;

    std::optional<int> w;
    if (B.watermark() && detail::reach(A))
        w = *detail::reach(A) + *B.watermark();
    if (A.watermark() && detail::reach(B)) {
        const int c = *A.watermark() + *detail::reach(B);
        w = w ? std::max(*w, c) : c;
    }
    if (floor)
        w = w ? std::max(*w, *floor) : *floor;

    if (!w) {
        const bool negative_orders = A.lowest() && *A.lowest() < 0;
        bool nonconstant = false;
        for (const auto& [k, f] : B.coefficients())
            nonconstant = nonconstant || !f.is_constant();
        if (negative_orders && nonconstant)
            throw Error("composition has an infinite expansion; a floor order is required");
    }
    out.watermark_ = w;

    const Scalar kappa = Scalar::kappa(r);
    for (const auto& [j, b] : B.coefficients()) {
        std::vector<DiffPolynomial> derivs{b}; // derivs[l] = kappa^l * b^(l)
        for (const auto& [i, a] : A.coefficients()) {
            for (unsigned l = 0;; ++l) {
                const int order = i + j - static_cast<int>(l);
                if (w && order < *w)
                    break;
                if (i >= 0 && static_cast<int>(l) > i)
                    break;
                while (derivs.size() <= l)
                    derivs.push_back(total_derivative(derivs.back()) * kappa);
                if (derivs[l].is_zero())
                    break;
                const Rational c = binomial(i, l);
                out.add(order, a * derivs[l] * Scalar::rational(r, c));
            }
        }
    }
    return out;
}

/// A^n; n = 0 gives the identity.  `floor` bounds the final result and is
/// pushed back to intermediate products.
inline PseudoDiffOp power(const PseudoDiffOp& A, unsigned n, std::optional<int> floor = std::nullopt)
{
    PseudoDiffOp out = PseudoDiffOp::identity(A.r());
    const int reach = detail::reach(A).value_or(0);
    for (unsigned k = 1; k <= n; ++k) {
        std::optional<int> step_floor;
        if (floor)
            step_floor = *floor - static_cast<int>(n - k) * reach;
        out = compose(out, A, step_floor);
    }
    if (floor)
        out = out.truncated(*floor);
    return out;
}

inline PseudoDiffOp commutator(const PseudoDiffOp& A, const PseudoDiffOp& B,
                               std::optional<int> floor = std::nullopt)
{
    return compose(A, B, floor) - compose(B, A, floor);
}

struct SplitParts {
    PseudoDiffOp plus;  // orders >= 0, exact
    PseudoDiffOp minus; // orders < 0, carrying the input watermark
};

/// Splits A = A_+ + A_-; requires A to be certified down to order 0.
inline SplitParts split_parts(const PseudoDiffOp& A)
{
    if (A.watermark() && *A.watermark() > 0)
        throw Error("differential part not certified: watermark " + std::to_string(*A.watermark()) +
                    " > 0");
    SplitParts parts{PseudoDiffOp(A.r()), PseudoDiffOp(A.r())};
    if (A.watermark())
        parts.minus = parts.minus.truncated(*A.watermark());
    for (const auto& [k, f] : A.coefficients()) {
        if (k >= 0)
            parts.plus.add(k, f);
        else
            parts.minus.add(k, f);
    }
    return parts;
}

/// Coefficient of D^-1.
inline DiffPolynomial residue(const PseudoDiffOp& A)
{
    if (A.watermark() && *A.watermark() > -1)
        throw Error("residue not certified: watermark " + std::to_string(*A.watermark()) + " > -1");
    return A.coefficient(-1);
}

/// Compares all orders certified in both operators.
inline bool certified_equal(const PseudoDiffOp& A, const PseudoDiffOp& B)
{
    if (A.r() != B.r())
        throw Error("comparison across r contexts");
    std::optional<int> w = A.watermark();
    if (B.watermark())
        w = w ? std::max(*w, *B.watermark()) : *B.watermark();
    auto restricted = [&](const PseudoDiffOp& X) { return w ? X.truncated(*w) : X; };
    return restricted(A).coefficients() == restricted(B).coefficients();
}

/// Checks the Lax normal form: exact, purely differential, monic of order r, no D^(r-1) term.
inline void require_lax_form(const PseudoDiffOp& Q)
{
    const int r = Q.r();
    if (!Q.is_exact() || !Q.is_differential())
        throw Error("Lax operator must be an exact differential operator");
    if (Q.top() != r || !(Q.coefficient(r) == DiffPolynomial::constant(r, 1)))
        throw Error("Lax operator must be monic of order r=" + std::to_string(r));
    if (!Q.coefficient(r - 1).is_zero())
        throw Error("Lax operator must have zero D^(r-1) coefficient");
}

/// Q^{1/r} = D + sum_{k<=-1} a_k D^k with `depth` certified orders below D,
/// i.e. watermark 1 - depth.  Each a_k is fixed by the order r-1+k coefficient
/// of the r-th power, where it enters linearly with factor r.
inline PseudoDiffOp rth_root(const PseudoDiffOp& Q, int depth)
{
    require_lax_form(Q);
    if (depth < 1)
        throw Error("root depth must be positive");
    const int r = Q.r();
    const Scalar inv_r = Scalar::rational(r, Rational(1, r));
    PseudoDiffOp R = PseudoDiffOp::D(r, 1);
    for (int k = 0; k >= 1 - depth; --k) {
        const int order = r - 1 + k;
        const PseudoDiffOp P = power(R, static_cast<unsigned>(r), order);
        DiffPolynomial gap = Q.coefficient(order) - P.coefficient(order);
        R.add(k, gap * inv_r);
    }
    return R.truncated(1 - depth);
}

/// Q^{a + (m+1)/r} = Q^a ∘ (Q^{1/r})^{m+1}, certified `depth` orders below
/// its leading order ra+m+1.  For m = r-1 this is the exact power Q^{a+1}.
inline PseudoDiffOp fractional_power(const PseudoDiffOp& Q, unsigned a, int m, int depth)
{
    require_lax_form(Q);
    const int r = Q.r();
    if (m < 0 || m > r - 1)
        throw Error("fractional power index m=" + std::to_string(m) + " outside 0..r-1");
    if (m == r - 1)
        return power(Q, a + 1);
    const PseudoDiffOp R = rth_root(Q, depth);
    return compose(power(Q, a), power(R, static_cast<unsigned>(m + 1)));
}

} // namespace rspin
