// Seeds the genus-zero r = 2 table, prints a few extended correlators and
// checks chi~(t~) = Phi(t) through order 6.

#include "rspin/potential.hpp"

#include <iostream>

using namespace rspin;

int main()
{
    const auto table = seed_genus0_wk(CorrelatorTable(2), 6);
    for (const auto& [key, value] : table.entries())
        std::cout << key.str() << " = " << to_string(value) << "\n";

    std::cout << "\n";
    for (const std::vector<long>& mts : {std::vector<long>{2, 0, 0, 0}, {2, 2, 0, 0, 0}, {4, 0, 0, 0, 0}, {1, 0, 0}}) {
        std::cout << "<";
        for (std::size_t i = 0; i < mts.size(); ++i)
            std::cout << (i ? " " : "") << "tau~_" << mts[i];
        std::cout << ">_0 = " << tilde_correlator(table, 0, mts).str() << "\n";
    }

    const auto rep = verify_change_of_variables(table, {6, 0});
    std::cout << "\nchi~ = Phi through order 6: " << (rep.pass ? "PASS" : "FAIL") << " (" << rep.terms_compared
              << " coefficients)\n";
    return rep.pass ? 0 : 1;
}
