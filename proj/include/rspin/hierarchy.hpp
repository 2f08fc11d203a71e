#pragma once

// The r-th Gelfand-Dickey hierarchy for Q = D^r - sum_{m=0}^{r-2} u_m D^m.
//
// Two normalizations of the same flows are provided:
//   tilde:    i*sqrt(r)*(a + (m+1)/r) dQ/dt~^{ar+m} = [Q_+^{a+(m+1)/r}, Q]
//   standard: i*[ar+m+1]_r dQ/dt_a^m = (-1)^a r^{a+1/2} [Q_+^{a+(m+1)/r}, Q]
// Evolution equations are read off from dQ/dt = -sum_m (du_m/dt) D^m.

#include "rspin/descent.hpp"
#include "rspin/psido.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rspin {

class LaxOperator {
public:
    explicit LaxOperator(int r) : r_(r), op_(r < 2 ? 2 : r)
    {
        if (r < 2)
            throw Error("the Lax operator needs r >= 2, got " + std::to_string(r));
        op_ = PseudoDiffOp::D(r, r);
        for (int m = 0; m <= r - 2; ++m)
            op_.add(m, -DiffPolynomial::variable(r, m));
        require_lax_form(op_);
    }

    int r() const { return r_; }
    const PseudoDiffOp& op() const { return op_; }

private:
    int r_;
    PseudoDiffOp op_;
};

inline LaxOperator build_lax(int r) { return LaxOperator(r); }

/// Retained orders used for roots and fractional powers when none is given.
inline int default_depth(int r) { return r + 6; }

enum class Presentation { Tilde, Standard };

struct FlowResult {
    Presentation presentation = Presentation::Tilde;
    IndexPair index;
    std::map<int, DiffPolynomial> evolution; // m -> du_m/dt, for m = 0..r-2
    PseudoDiffOp commutator;
    Scalar prefactor;
};

/// [Q_+^{a+(m+1)/r}, Q], checked to be differential of order <= r-2.
inline PseudoDiffOp flow_commutator(const LaxOperator& Q, int a, int m,
                                    std::optional<int> depth = std::nullopt)
{
    const int r = Q.r();
    if (a < 0)
        throw Error("flow index a must be nonnegative");
    if (m < 0 || m > r - 1)
        throw Error("flow index m=" + std::to_string(m) + " outside 0..r-1");
    const int d = depth.value_or(default_depth(r));
    const PseudoDiffOp P = fractional_power(Q.op(), static_cast<unsigned>(a), m, d);
    if (P.watermark() && *P.watermark() > 0)
        throw Error("depth " + std::to_string(d) + " too shallow to certify Q_+^{" +
                    std::to_string(a) + "+" + std::to_string(m + 1) + "/" + std::to_string(r) +
                    "}; need depth >= " + std::to_string(r * a + m + 1));
    const PseudoDiffOp plus = split_parts(P).plus;
    PseudoDiffOp C = commutator(plus, Q.op());
    if (!C.is_exact() || !C.is_differential())
        throw Error("flow commutator is not an exact differential operator");
    if (C.top() && *C.top() > r - 2)
        throw Error("flow commutator has a nonzero D^" + std::to_string(*C.top()) +
                    " coefficient; expected order <= r-2");
    return C;
}

namespace detail {

inline FlowResult make_flow(const LaxOperator& Q, Presentation kind, IndexPair ip, Scalar prefactor,
                            std::optional<int> depth)
{
    FlowResult out{kind, ip, {}, flow_commutator(Q, ip.a, ip.m, depth), prefactor};
    for (int m = 0; m <= Q.r() - 2; ++m)
        out.evolution.emplace(m, -(out.commutator.coefficient(m) * prefactor));
    return out;
}

} // namespace detail

/// Flow along t~^{mt}, mt = ar + m, with prefactor (i*sqrt(r)*(a+(m+1)/r))^{-1}.
inline FlowResult flow_tilde(const LaxOperator& Q, long mtilde, std::optional<int> depth = std::nullopt)
{
    const int r = Q.r();
    const IndexPair ip = decompose_index(mtilde, r);
    const Scalar lhs(r, 0, 0, 0, make_rational(static_cast<long>(ip.a) * r + ip.m + 1, r));
    return detail::make_flow(Q, Presentation::Tilde, ip, lhs.inverse(), depth);
}

/// Flow along t_a^m, with prefactor (-1)^a r^a s / (i [ar+m+1]_r).
inline FlowResult flow_standard(const LaxOperator& Q, int a, int m,
                                std::optional<int> depth = std::nullopt)
{
    const int r = Q.r();
    if (a < 0 || m < 0 || m > r - 1)
        throw Error("flow index (a, m) out of range");
    const Rational sign_power = (a % 2 ? -1 : 1) * rational_pow(Rational(r), static_cast<unsigned>(a));
    const Scalar numerator = Scalar::sqrt_r(r) * sign_power;
    const Scalar denominator = Scalar::i(r) * r_factorial(a + 1, m, r);
    return detail::make_flow(Q, Presentation::Standard, IndexPair{a, m, r}, numerator / denominator,
                             depth);
}

/// "du<m>/dt = <poly>" for every field.
inline std::vector<std::string> evolution_equations(const FlowResult& f)
{
    std::vector<std::string> out;
    for (const auto& [m, p] : f.evolution)
        out.push_back("du" + std::to_string(m) + "/dt = " + p.str());
    return out;
}

struct ConsistencyReport {
    int r = 2;
    int a = 0;
    int m = 0;
    Rational coefficient;
    bool pass = false;
    FlowResult standard;
    FlowResult tilde;

    std::string line() const
    {
        return "r=" + std::to_string(r) + " a=" + std::to_string(a) + " m=" + std::to_string(m) +
               " : " + (pass ? "PASS" : "FAIL");
    }
};

/// Checks d/dt_a^m = c * d/dt~^{ar+m} on every evolution polynomial, with
/// c = (-1)^a r^a / [r(a-1)+m+1]_r.
inline ConsistencyReport check_presentation_consistency(int r, int a, int m,
                                                        std::optional<int> depth = std::nullopt)
{
    const LaxOperator Q(r);
    ConsistencyReport rep;
    rep.r = r;
    rep.a = a;
    rep.m = m;
    rep.coefficient = variable_map_coefficient(a, m, r);
    rep.standard = flow_standard(Q, a, m, depth);
    rep.tilde = flow_tilde(Q, static_cast<long>(a) * r + m, depth);
    const Scalar c = Scalar::rational(r, rep.coefficient);
    rep.pass = true;
    for (int field = 0; field <= r - 2; ++field)
        if (!(rep.standard.evolution.at(field) == rep.tilde.evolution.at(field) * c))
            rep.pass = false;
    return rep;
}

inline std::vector<ConsistencyReport> check_flow_grid(int r, int max_a,
                                                      std::optional<int> depth = std::nullopt)
{
    std::vector<ConsistencyReport> out;
    for (int a = 0; a <= max_a; ++a)
        for (int m = 0; m <= r - 1; ++m)
            out.push_back(check_presentation_consistency(r, a, m, depth));
    return out;
}

} // namespace rspin
