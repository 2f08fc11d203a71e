#pragma once

// Seeded generators for property tests.

#include "rspin/psido.hpp"

#include <random>

namespace rspin::testing {

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    int uniform(int lo, int hi)
    {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    Rational rational(int span = 5)
    {
        int num = uniform(-span, span);
        int den = uniform(1, span);
        return make_rational(num, den);
    }

    Scalar scalar(int r)
    {
        return Scalar(r, rational(), rational(), rational(), rational());
    }

    Scalar rational_scalar(int r) { return Scalar::rational(r, rational()); }

    /// A polynomial with up to `terms` terms, jets u_m^(k) with k <= max_k, degree <= max_deg.
    DiffPolynomial poly(int r, int terms = 3, int max_k = 2, int max_deg = 2, bool complex = false)
    {
        DiffPolynomial p(r);
        const int n = uniform(0, terms);
        for (int t = 0; t < n; ++t) {
            Monomial mono;
            const int deg = uniform(0, max_deg);
            for (int d = 0; d < deg; ++d)
                mono = mono * Monomial(JetVariable{uniform(0, r - 2), uniform(0, max_k)});
            p.add_term(mono, complex ? scalar(r) : rational_scalar(r));
        }
        return p;
    }

    /// An exact operator with orders in [low, top].
    PseudoDiffOp op(int r, int top, int low, int terms = 2)
    {
        PseudoDiffOp A(r);
        for (int k = low; k <= top; ++k)
            A.add(k, poly(r, terms, 1, 2, true));
        return A;
    }

private:
    std::mt19937 rng_;
};

} // namespace rspin::testing
