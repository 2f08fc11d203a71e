#pragma once

// Descent calculus for r-spin virtual classes: index decomposition
// mt = a*r + m, the r-factorial, single descent steps
//     c(m + r*delta_i) = -((m_i + 1)/r) * psi_i * c(m),
// their iterated closed form, the change-of-variables coefficient, and the
// virtual degree D = ((r-2)(g-1) + sum m_i) / r.

#include "rspin/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rspin {

struct IndexPair {
    int a = 0;
    int m = 0;
    int r = 2;

    long tilde() const { return static_cast<long>(a) * r + m; }
    /// m = r-1, i.e. mt = -1 mod r; such insertions carry a vanishing virtual class.
    bool vanishing() const { return m == r - 1; }

    auto operator<=>(const IndexPair&) const = default;
};

inline void require_root_index(int r)
{
    if (r < 2)
        throw Error("root index r must be >= 2, got " + std::to_string(r));
}

/// The unique (a, m) with mt = a*r + m and 0 <= m <= r-1.
inline IndexPair decompose_index(long mtilde, int r)
{
    require_root_index(r);
    if (mtilde < 0)
        throw Error("index decomposition needs mt >= 0, got " + std::to_string(mtilde));
    return IndexPair{static_cast<int>(mtilde / r), static_cast<int>(mtilde % r), r};
}

/// [r(a-1)+m+1]_r = prod_{i=1}^{a} (r(a-i) + m + 1); equal to 1 for a = 0.
inline Rational r_factorial(int a, int m, int r)
{
    require_root_index(r);
    if (a < 0)
        throw Error("r-factorial needs a >= 0");
    Integer p(1);
    for (int i = 1; i <= a; ++i)
        p *= static_cast<long>(r) * (a - i) + m + 1;
    return Rational(p);
}

/// scalar * psi^psi_power; a zero scalar is normalized to psi power 0.
struct DescentFactor {
    Rational scalar{1};
    unsigned psi_power = 0;

    DescentFactor() = default;
    DescentFactor(Rational s, unsigned p) : scalar(std::move(s)), psi_power(p)
    {
        scalar.canonicalize();
        if (scalar == 0)
            psi_power = 0;
    }

    friend DescentFactor operator*(const DescentFactor& x, const DescentFactor& y)
    {
        return DescentFactor(x.scalar * y.scalar, x.psi_power + y.psi_power);
    }

    friend bool operator==(const DescentFactor&, const DescentFactor&) = default;

    std::string str() const
    {
        if (scalar == 0)
            return "0";
        std::string out = to_string(scalar);
        if (psi_power == 1)
            out += "*psi";
        else if (psi_power > 1)
            out += "*psi^" + std::to_string(psi_power);
        return out;
    }
};

/// A type tuple (m_1..m_n) at genus g.  Entries are >= 0 except that at most
/// one entry may equal -1.
class TypeTuple {
public:
    TypeTuple(std::vector<int> entries, int r, int genus = 0)
        : entries_(std::move(entries)), r_(r), genus_(genus)
    {
        require_root_index(r);
        if (genus < 0)
            throw Error("genus must be nonnegative");
        int negatives = 0;
        for (int e : entries_) {
            if (e < -1)
                throw Error("type entry " + std::to_string(e) + " below -1");
            if (e == -1)
                ++negatives;
        }
        if (negatives > 1)
            throw Error("type tuple has two or more negative entries; the virtual class is not defined");
    }

    const std::vector<int>& entries() const { return entries_; }
    int r() const { return r_; }
    int genus() const { return genus_; }
    std::size_t size() const { return entries_.size(); }

    /// t + r*delta_i
    TypeTuple shifted(std::size_t i) const
    {
        check_position(i);
        std::vector<int> e = entries_;
        e[i] += r_;
        return TypeTuple(std::move(e), r_, genus_);
    }

    void check_position(std::size_t i) const
    {
        if (i >= entries_.size())
            throw Error("position " + std::to_string(i + 1) + " outside a tuple of length " +
                        std::to_string(entries_.size()));
    }

    friend bool operator==(const TypeTuple&, const TypeTuple&) = default;

    std::string str() const
    {
        std::string out = "(";
        for (std::size_t i = 0; i < entries_.size(); ++i)
            out += (i ? "," : "") + std::to_string(entries_[i]);
        return out + ")";
    }

private:
    std::vector<int> entries_;
    int r_;
    int genus_;
};

struct DescentStep {
    DescentFactor factor;
    TypeTuple shifted;
};

/// One application of the descent relation at position i (0-based):
/// c(t + r*delta_i) = factor * c(t) with factor = -((m_i+1)/r) * psi_i.
inline DescentStep descent_step(const TypeTuple& t, std::size_t i)
{
    t.check_position(i);
    const int mi = t.entries()[i];
    DescentFactor f(Rational(-(mi + 1), t.r()), 1);
    return {f, t.shifted(i)};
}

/// (-1)^a r^{-a} [r(a-1)+m+1]_r, the descent coefficient for mt = ar + m.
inline Rational descent_coefficient(int a, int m, int r)
{
    Rational c = r_factorial(a, m, r) / rational_pow(Rational(r), static_cast<unsigned>(a));
    return (a % 2) ? Rational(-c) : c;
}

/// The change-of-variables coefficient (-1)^a r^a / [r(a-1)+m+1]_r.
inline Rational variable_map_coefficient(int a, int m, int r)
{
    if (m < 0 || m > r - 1)
        throw Error("variable map needs 0 <= m <= r-1");
    Rational c = rational_pow(Rational(r), static_cast<unsigned>(a)) / r_factorial(a, m, r);
    return (a % 2) ? Rational(-c) : c;
}

struct PositionFactor {
    long mtilde = 0;
    IndexPair index;
    DescentFactor factor;
    bool vanishing = false;
};

struct ClosedForm {
    std::vector<PositionFactor> positions;
    TypeTuple base;

    Rational total_scalar() const
    {
        Rational s(1);
        for (const auto& p : positions)
            s *= p.factor.scalar;
        return s;
    }
};

/// c(mt) = c(m) * prod_i (-psi_i/r)^{a_i} [r(a_i-1)+m_i+1]_r with mt = r*a + m.
/// Positions with mt_i = -1 mod r contribute the zero factor.
inline ClosedForm descent_closed_form(const TypeTuple& mtilde)
{
    std::vector<int> base;
    std::vector<PositionFactor> positions;
    for (int mt : mtilde.entries()) {
        if (mt < 0)
            throw Error("closed-form descent needs nonnegative entries");
        const IndexPair ip = decompose_index(mt, mtilde.r());
        PositionFactor pf;
        pf.mtilde = mt;
        pf.index = ip;
        pf.vanishing = ip.vanishing();
        pf.factor = pf.vanishing ? DescentFactor(0, 0)
                                 : DescentFactor(descent_coefficient(ip.a, ip.m, ip.r),
                                                 static_cast<unsigned>(ip.a));
        positions.push_back(pf);
        base.push_back(ip.m);
    }
    return {std::move(positions), TypeTuple(std::move(base), mtilde.r(), mtilde.genus())};
}

/// D = ((r-2)(g-1) + sum m_i) / r, possibly non-integral.
inline Rational virtual_degree(const TypeTuple& t)
{
    long total = static_cast<long>(t.r() - 2) * (t.genus() - 1);
    for (int e : t.entries())
        total += e;
    return make_rational(total, t.r());
}

} // namespace rspin
