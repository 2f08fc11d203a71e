#pragma once

// Correlator store for <tau_{a_1,m_1} ... tau_{a_n,m_n}>_g with the selection
// rule, the vanishing rule for m_i = r-1, and the extended correlators
// <tau~_{mt_1} ... tau~_{mt_n}>_g obtained from them by closed-form descent.
//
// In formal mode unknown correlators are opaque atoms, so identities between
// generating functions can be checked without any numeric data.

#include "rspin/descent.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rspin {

class CorrelatorKey {
public:
    CorrelatorKey(int r, int genus, std::vector<IndexPair> insertions)
        : r_(r), genus_(genus), insertions_(std::move(insertions))
    {
        require_root_index(r);
        if (genus < 0)
            throw Error("correlator genus must be nonnegative");
        for (auto& ip : insertions_) {
            if (ip.a < 0 || ip.m < 0 || ip.m > r - 1)
                throw Error("insertion tau_{" + std::to_string(ip.a) + "," + std::to_string(ip.m) +
                            "} out of range for r=" + std::to_string(r));
            ip.r = r;
        }
        std::sort(insertions_.begin(), insertions_.end());
    }

    /// Key from parallel a/m lists.
    static CorrelatorKey from_lists(int r, int genus, const std::vector<int>& a, const std::vector<int>& m)
    {
        if (a.size() != m.size())
            throw Error("a and m lists differ in length");
        std::vector<IndexPair> ins;
        for (std::size_t i = 0; i < a.size(); ++i)
            ins.push_back(IndexPair{a[i], m[i], r});
        return CorrelatorKey(r, genus, std::move(ins));
    }

    int r() const { return r_; }
    int genus() const { return genus_; }
    const std::vector<IndexPair>& insertions() const { return insertions_; }
    std::size_t size() const { return insertions_.size(); }

    bool has_vanishing_insertion() const
    {
        return std::any_of(insertions_.begin(), insertions_.end(),
                           [](const IndexPair& ip) { return ip.vanishing(); });
    }

    TypeTuple type() const
    {
        std::vector<int> m;
        for (const auto& ip : insertions_)
            m.push_back(ip.m);
        return TypeTuple(std::move(m), r_, genus_);
    }

    int psi_total() const
    {
        int s = 0;
        for (const auto& ip : insertions_)
            s += ip.a;
        return s;
    }

    auto operator<=>(const CorrelatorKey&) const = default;

    /// e.g. "<tau_{0,0}^3*tau_{1,0}>_0"
    std::string str() const
    {
        std::string out = "<";
        for (std::size_t i = 0; i < insertions_.size();) {
            std::size_t j = i;
            while (j < insertions_.size() && insertions_[j] == insertions_[i])
                ++j;
            if (i)
                out += "*";
            out += "tau_{" + std::to_string(insertions_[i].a) + "," + std::to_string(insertions_[i].m) + "}";
            if (j - i > 1)
                out += "^" + std::to_string(j - i);
            i = j;
        }
        return out + ">_" + std::to_string(genus_);
    }

private:
    int r_;
    int genus_;
    std::vector<IndexPair> insertions_;
};

struct SelectionResult {
    bool pass = false;
    Rational degree;
    std::string reason;
};

/// Passes iff D is a nonnegative integer and D + sum a_i = 3g - 3 + n.
inline SelectionResult selection_rule(const CorrelatorKey& key)
{
    SelectionResult res;
    res.degree = virtual_degree(key.type());
    const long n = static_cast<long>(key.size());
    const long dim = 3L * key.genus() - 3 + n;
    if (n == 0) {
        res.reason = "no insertions";
    } else if (!is_integer(res.degree)) {
        res.reason = "D = " + to_string(res.degree) + " is not an integer";
    } else if (res.degree < 0) {
        res.reason = "D = " + to_string(res.degree) + " is negative";
    } else if (res.degree + key.psi_total() != dim) {
        res.reason = "D + sum a = " + to_string(res.degree + key.psi_total()) +
                     " differs from 3g-3+n = " + std::to_string(dim);
    } else {
        res.pass = true;
    }
    return res;
}

/// A rational linear combination of correlator atoms plus a constant.
class CorrelatorValue {
public:
    CorrelatorValue() = default;
    CorrelatorValue(Rational c) : constant_(std::move(c)) {}

    static CorrelatorValue atom(const CorrelatorKey& key)
    {
        CorrelatorValue v;
        v.atoms_.emplace(key, Rational(1));
        return v;
    }

    const Rational& constant() const { return constant_; }
    const std::map<CorrelatorKey, Rational>& atoms() const { return atoms_; }
    bool is_zero() const { return constant_ == 0 && atoms_.empty(); }
    bool is_numeric() const { return atoms_.empty(); }

    CorrelatorValue& operator+=(const CorrelatorValue& v)
    {
        constant_ += v.constant_;
        for (const auto& [k, c] : v.atoms_) {
            auto [it, ins] = atoms_.try_emplace(k, c);
            if (!ins) {
                it->second += c;
                if (it->second == 0)
                    atoms_.erase(it);
            }
        }
        return *this;
    }

    CorrelatorValue& operator*=(const Rational& s)
    {
        if (s == 0) {
            constant_ = 0;
            atoms_.clear();
            return *this;
        }
        constant_ *= s;
        for (auto& [k, c] : atoms_)
            c *= s;
        return *this;
    }

    friend CorrelatorValue operator*(CorrelatorValue v, const Rational& s) { return v *= s; }
    friend CorrelatorValue operator+(CorrelatorValue v, const CorrelatorValue& w) { return v += w; }
    friend bool operator==(const CorrelatorValue&, const CorrelatorValue&) = default;

    std::string str() const
    {
        std::string out;
        auto append = [&](const Rational& c, const std::string& atom) {
            const bool neg = c < 0;
            const Rational mag = abs(c);
            std::string body = atom.empty() ? to_string(mag) : (mag == 1 ? atom : to_string(mag) + "*" + atom);
            if (out.empty())
                out = (neg ? "-" : "") + body;
            else
                out += (neg ? " - " : " + ") + body;
        };
        if (constant_ != 0)
            append(constant_, "");
        for (const auto& [k, c] : atoms_)
            append(c, k.str());
        return out.empty() ? "0" : out;
    }

private:
    Rational constant_{0};
    std::map<CorrelatorKey, Rational> atoms_;
};

enum class TableMode { Numeric, Formal };

inline std::string to_string(TableMode m) { return m == TableMode::Numeric ? "numeric" : "formal"; }

class CorrelatorTable {
public:
    explicit CorrelatorTable(int r, TableMode mode = TableMode::Numeric) : r_(r), mode_(mode)
    {
        require_root_index(r);
    }

    int r() const { return r_; }
    TableMode mode() const { return mode_; }
    const std::map<CorrelatorKey, Rational>& entries() const { return entries_; }
    bool frozen() const { return frozen_; }
    void freeze() { frozen_ = true; }

    /// Stores a value after checking the selection and vanishing rules.
    void insert(const CorrelatorKey& key, const Rational& value)
    {
        if (frozen_)
            throw Error("correlator table is frozen");
        if (key.r() != r_)
            throw Error("key for r=" + std::to_string(key.r()) + " inserted into an r=" +
                        std::to_string(r_) + " table");
        if (key.has_vanishing_insertion()) {
            if (value != 0)
                throw Error(key.str() + " has an insertion with m = r-1 and must vanish");
            return;
        }
        const SelectionResult sel = selection_rule(key);
        if (!sel.pass)
            throw Error(key.str() + " violates the selection rule: " + sel.reason);
        if (!entries_.emplace(key, value).second)
            throw Error("duplicate entry " + key.str());
    }

private:
    int r_;
    TableMode mode_;
    std::map<CorrelatorKey, Rational> entries_;
    bool frozen_ = false;
};

/// Stored value; zero for vanishing or selection-violating keys; for absent
/// keys zero in numeric mode and the key's atom in formal mode.
inline CorrelatorValue lookup_or_zero(const CorrelatorTable& table, const CorrelatorKey& key)
{
    if (key.r() != table.r())
        throw Error("lookup across r contexts");
    if (key.has_vanishing_insertion() || !selection_rule(key).pass)
        return {};
    auto it = table.entries().find(key);
    if (it != table.entries().end())
        return it->second;
    if (table.mode() == TableMode::Formal)
        return CorrelatorValue::atom(key);
    return {};
}

namespace detail {

// Genus-zero r = 2 correlators from the string equation
//   <tau_0 prod tau_{a_i}> = sum_j <tau_{a_j - 1} prod_{i != j} tau_{a_i}>
// with <tau_0^3> = 1.  Input is a sorted multiset of psi exponents.
inline Rational string_equation(std::vector<int> a, std::map<std::vector<int>, Rational>& memo)
{
    std::sort(a.begin(), a.end());
    const long n = static_cast<long>(a.size());
    long sum = 0;
    for (int x : a)
        sum += x;
    if (n < 3 || sum != n - 3)
        return 0;
    if (n == 3)
        return 1;
    if (auto it = memo.find(a); it != memo.end())
        return it->second;
    // sum = n-3 < n forces some a_i = 0; after sorting it is a[0].
    std::vector<int> rest(a.begin() + 1, a.end());
    Rational total(0);
    for (std::size_t j = 0; j < rest.size(); ++j) {
        if (rest[j] == 0)
            continue;
        std::vector<int> lowered = rest;
        --lowered[j];
        total += string_equation(lowered, memo);
    }
    memo.emplace(a, total);
    return total;
}

// All multisets of size n over {0..alphabet-1}, as nondecreasing index lists.
template <class Visit>
void for_each_multiset(int alphabet, int n, Visit&& visit)
{
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    if (n == 0) {
        visit(idx);
        return;
    }
    if (alphabet <= 0)
        return;
    while (true) {
        visit(idx);
        int pos = n - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == alphabet - 1)
            --pos;
        if (pos < 0)
            return;
        const int v = idx[static_cast<std::size_t>(pos)] + 1;
        for (int p = pos; p < n; ++p)
            idx[static_cast<std::size_t>(p)] = v;
    }
}

} // namespace detail

/// Populates every genus-zero r = 2 key with at most max_points insertions
/// from the string-equation recursion.
inline CorrelatorTable seed_genus0_wk(const CorrelatorTable& table, int max_points)
{
    if (table.r() != 2)
        throw Error("no numeric oracle for r=" + std::to_string(table.r()));
    if (table.mode() != TableMode::Numeric)
        throw Error("seeding needs a numeric table");
    CorrelatorTable out = table;
    std::map<std::vector<int>, Rational> memo;
    for (int n = 3; n <= max_points; ++n) {
        // psi exponents sum to n-3, each in 0..n-3
        detail::for_each_multiset(n - 2, n, [&](const std::vector<int>& a) {
            long sum = 0;
            for (int x : a)
                sum += x;
            if (sum != n - 3)
                return;
            const Rational value = detail::string_equation(a, memo);
            if (value == 0)
                return;
            const CorrelatorKey key = CorrelatorKey::from_lists(2, 0, a, std::vector<int>(a.size(), 0));
            if (out.entries().count(key) == 0)
                out.insert(key, value);
        });
    }
    return out;
}

/// <tau~_{mt_1} ... tau~_{mt_n}>_g = prod_i d(a_i, m_i) * <tau_{a_1,m_1} ... >_g
/// with d the closed-form descent scalar (zero when mt_i = -1 mod r).
inline CorrelatorValue tilde_correlator(const CorrelatorTable& table, int genus, const std::vector<long>& mtilde)
{
    std::vector<int> entries;
    for (long mt : mtilde) {
        if (mt < 0)
            throw Error("extended correlator indices must be nonnegative");
        entries.push_back(static_cast<int>(mt));
    }
    const ClosedForm cf = descent_closed_form(TypeTuple(entries, table.r(), genus));
    const Rational scalar = cf.total_scalar();
    if (scalar == 0)
        return {};
    std::vector<IndexPair> base;
    for (const auto& p : cf.positions)
        base.push_back(p.index);
    return lookup_or_zero(table, CorrelatorKey(table.r(), genus, std::move(base))) * scalar;
}

} // namespace rspin
