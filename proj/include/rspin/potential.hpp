#pragma once

// Truncated generating functions
//   Phi(t)   = sum_g lambda^{2g-2} <exp(sum t_a^m tau_{a,m})>_g
//   chi(x)   = Phi restricted to t_0^m = x^m, t_a^m = 0 for a > 0
//   chi~(t~) = sum_g lambda^{2g-2} <exp(sum t~^mt tau~_mt)>_g
// and the check that chi~ equals Phi under t~^{ar+m} = c(a,m) t_a^m.

#include "rspin/correlators.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rspin {

/// t_a^m
struct PhaseVariable {
    int a = 0;
    int m = 0;
    auto operator<=>(const PhaseVariable&) const = default;
    std::string str() const { return "t(" + std::to_string(a) + "," + std::to_string(m) + ")"; }
};

/// x^m
struct SmallPhaseVariable {
    int m = 0;
    auto operator<=>(const SmallPhaseVariable&) const = default;
    std::string str() const { return "x(" + std::to_string(m) + ")"; }
};

/// t~^mt
struct TildeVariable {
    long mt = 0;
    auto operator<=>(const TildeVariable&) const = default;
    std::string str() const { return "tt(" + std::to_string(mt) + ")"; }
};

template <class Var>
class SeriesMonomial {
public:
    using Factor = std::pair<Var, unsigned>;

    SeriesMonomial() = default;

    /// From a nondecreasing list of variables.
    explicit SeriesMonomial(const std::vector<Var>& sorted)
    {
        for (const Var& v : sorted) {
            if (!factors_.empty() && factors_.back().first == v)
                ++factors_.back().second;
            else
                factors_.emplace_back(v, 1U);
        }
    }

    const std::vector<Factor>& factors() const { return factors_; }

    unsigned degree() const
    {
        unsigned d = 0;
        for (const auto& f : factors_)
            d += f.second;
        return d;
    }

    /// 1 / prod k_j!, the exponential symmetry factor.
    Rational symmetry_factor() const
    {
        Rational s(1);
        for (const auto& f : factors_)
            s /= factorial(f.second);
        return s;
    }

    auto operator<=>(const SeriesMonomial&) const = default;

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
        return out.empty() ? "1" : out;
    }

private:
    std::vector<Factor> factors_;
};

struct GenusTag {
    int genus = 0;
    int lambda_exponent() const { return 2 * genus - 2; }
    auto operator<=>(const GenusTag&) const = default;
};

template <class Var>
class PotentialSeries {
public:
    using Key = std::pair<GenusTag, SeriesMonomial<Var>>;

    explicit PotentialSeries(unsigned order = 0) : order_(order) {}

    unsigned order() const { return order_; }
    const std::map<Key, CorrelatorValue>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(int genus, const SeriesMonomial<Var>& mono, const CorrelatorValue& value)
    {
        if (mono.degree() > order_)
            throw Error("term of degree " + std::to_string(mono.degree()) + " exceeds truncation order " +
                        std::to_string(order_));
        if (value.is_zero())
            return;
        auto [it, ins] = terms_.try_emplace(Key{GenusTag{genus}, mono}, value);
        if (!ins) {
            it->second += value;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    CorrelatorValue coefficient(int genus, const SeriesMonomial<Var>& mono) const
    {
        auto it = terms_.find(Key{GenusTag{genus}, mono});
        return it == terms_.end() ? CorrelatorValue{} : it->second;
    }

    friend bool operator==(const PotentialSeries&, const PotentialSeries&) = default;

    static std::string term_str(const Key& key)
    {
        return "lambda^" + std::to_string(key.first.lambda_exponent()) + "*" + key.second.str();
    }

private:
    unsigned order_;
    std::map<Key, CorrelatorValue> terms_;
};

namespace detail {

// Nondecreasing index lists of length n over an alphabet whose weights are
// nondecreasing, with total weight at most `budget`.
template <class Visit>
void for_each_bounded_multiset(const std::vector<int>& weights, int n, int budget, Visit&& visit)
{
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int start, int remaining) -> void {
        if (pos == n) {
            visit(idx);
            return;
        }
        for (int i = start; i < static_cast<int>(weights.size()); ++i) {
            const int w = weights[static_cast<std::size_t>(i)];
            if (w > remaining)
                break;
            idx[static_cast<std::size_t>(pos)] = i;
            self(self, pos + 1, i, remaining - w);
        }
    };
    rec(rec, 0, 0, budget);
}

} // namespace detail

struct PotentialOptions {
    unsigned order = 6;
    int max_genus = 0;
};

struct Potentials {
    PotentialSeries<PhaseVariable> phi;
    PotentialSeries<SmallPhaseVariable> chi;
    PotentialSeries<TildeVariable> chi_tilde;
    int max_genus = 0;
    int max_a = 0;
    /// Set in numeric mode, where only the genus-zero stratum is emitted.
    bool genus_zero_only = false;
};

/// Largest descendant exponent a that can occur in a nonzero correlator with
/// at most `order` insertions and genus <= max_genus.
inline int max_descendant(const PotentialOptions& opt)
{
    return std::max(0, 3 * opt.max_genus - 3 + static_cast<int>(opt.order));
}

inline Potentials build_potentials(const CorrelatorTable& table, PotentialOptions opt)
{
    const int r = table.r();
    Potentials out;
    if (table.mode() == TableMode::Numeric)
        opt.max_genus = 0;
    out.genus_zero_only = table.mode() == TableMode::Numeric;
    out.max_genus = opt.max_genus;
    out.max_a = max_descendant(opt);
    out.phi = PotentialSeries<PhaseVariable>(opt.order);
    out.chi = PotentialSeries<SmallPhaseVariable>(opt.order);
    out.chi_tilde = PotentialSeries<TildeVariable>(opt.order);

    if (table.mode() == TableMode::Numeric && table.entries().empty())
        return out;

    std::vector<PhaseVariable> phase;
    std::vector<int> phase_weights;
    for (int a = 0; a <= out.max_a; ++a)
        for (int m = 0; m <= r - 1; ++m) {
            phase.push_back({a, m});
            phase_weights.push_back(a);
        }
    const long max_mt = static_cast<long>(r) * (out.max_a + 1) - 1;
    std::vector<int> tilde_weights;
    for (long mt = 0; mt <= max_mt; ++mt)
        tilde_weights.push_back(static_cast<int>(mt / r));

    for (int g = 0; g <= opt.max_genus; ++g) {
        for (int n = 1; n <= static_cast<int>(opt.order); ++n) {
            const int psi_budget = 3 * g - 3 + n;
            if (psi_budget < 0)
                continue;

            // Phi and chi from the table directly.
            detail::for_each_bounded_multiset(phase_weights, n, psi_budget, [&](const std::vector<int>& idx) {
                std::vector<PhaseVariable> vars;
                std::vector<IndexPair> ins;
                int psi = 0;
                for (int i : idx) {
                    vars.push_back(phase[static_cast<std::size_t>(i)]);
                    ins.push_back({vars.back().a, vars.back().m, r});
                    psi += vars.back().a;
                }
                const CorrelatorValue v = lookup_or_zero(table, CorrelatorKey(r, g, ins));
                if (v.is_zero())
                    return;
                const SeriesMonomial<PhaseVariable> mono(vars);
                out.phi.add(g, mono, v * mono.symmetry_factor());
                if (psi == 0) {
                    std::vector<SmallPhaseVariable> xs;
                    for (const auto& pv : vars)
                        xs.push_back({pv.m});
                    const SeriesMonomial<SmallPhaseVariable> xm(xs);
                    out.chi.add(g, xm, v * xm.symmetry_factor());
                }
            });

            // chi~ through the extended correlators.
            detail::for_each_bounded_multiset(tilde_weights, n, psi_budget, [&](const std::vector<int>& idx) {
                std::vector<long> mts;
                std::vector<TildeVariable> vars;
                for (int i : idx) {
                    mts.push_back(i);
                    vars.push_back({i});
                }
                const CorrelatorValue v = tilde_correlator(table, g, mts);
                if (v.is_zero())
                    return;
                const SeriesMonomial<TildeVariable> mono(vars);
                out.chi_tilde.add(g, mono, v * mono.symmetry_factor());
            });
        }
    }
    return out;
}

/// Phi with t_a^m = 0 for a > 0 and t_0^m renamed x^m.
inline PotentialSeries<SmallPhaseVariable> restrict_to_small_phase_space(const PotentialSeries<PhaseVariable>& phi)
{
    PotentialSeries<SmallPhaseVariable> out(phi.order());
    for (const auto& [key, value] : phi.terms()) {
        std::vector<SmallPhaseVariable> xs;
        bool primary = true;
        for (const auto& [v, e] : key.second.factors()) {
            primary = primary && v.a == 0;
            for (unsigned k = 0; k < e; ++k)
                xs.push_back({v.m});
        }
        if (primary)
            out.add(key.first.genus, SeriesMonomial<SmallPhaseVariable>(xs), value);
    }
    return out;
}

/// chi~ under t~^{ar+m} = c(a,m) t_a^m.
inline PotentialSeries<PhaseVariable> substitute_tilde_variables(const PotentialSeries<TildeVariable>& chi_tilde,
                                                                 int r)
{
    PotentialSeries<PhaseVariable> out(chi_tilde.order());
    for (const auto& [key, value] : chi_tilde.terms()) {
        std::vector<PhaseVariable> vars;
        Rational scale(1);
        for (const auto& [v, e] : key.second.factors()) {
            const IndexPair ip = decompose_index(v.mt, r);
            scale *= rational_pow(variable_map_coefficient(ip.a, ip.m, r), e);
            for (unsigned k = 0; k < e; ++k)
                vars.push_back({ip.a, ip.m});
        }
        // mt -> (a, m) is increasing, so vars stays sorted.
        out.add(key.first.genus, SeriesMonomial<PhaseVariable>(vars), value * scale);
    }
    return out;
}

struct SeriesMismatch {
    std::string term;
    std::string phi_value;
    std::string substituted_value;
};

struct ChangeOfVariablesReport {
    bool pass = true;
    std::size_t terms_compared = 0;
    std::vector<SeriesMismatch> mismatches;
    Potentials potentials;
};

/// Coefficient-by-coefficient comparison of chi~(t~(t)) with Phi(t).
inline ChangeOfVariablesReport verify_change_of_variables(const CorrelatorTable& table, PotentialOptions opt)
{
    ChangeOfVariablesReport rep;
    rep.potentials = build_potentials(table, opt);
    const auto substituted = substitute_tilde_variables(rep.potentials.chi_tilde, table.r());
    const auto& phi = rep.potentials.phi;

    std::map<PotentialSeries<PhaseVariable>::Key, std::pair<CorrelatorValue, CorrelatorValue>> joined;
    for (const auto& [k, v] : phi.terms())
        joined[k].first = v;
    for (const auto& [k, v] : substituted.terms())
        joined[k].second = v;
    rep.terms_compared = joined.size();
    for (const auto& [k, vals] : joined) {
        if (vals.first == vals.second)
            continue;
        rep.pass = false;
        rep.mismatches.push_back({PotentialSeries<PhaseVariable>::term_str(k), vals.first.str(), vals.second.str()});
    }
    return rep;
}

} // namespace rspin
