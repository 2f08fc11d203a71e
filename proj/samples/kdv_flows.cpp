// Prints the first odd KdV flows for r = 2 and the first Boussinesq flows for
// r = 3, then checks that the r = 2 flows commute.

#include "rspin/hierarchy.hpp"

#include <iostream>

using namespace rspin;

int main()
{
    const auto kdv = build_lax(2);
    std::cout << "Q = " << kdv.op().str() << "\n";
    for (long mt : {0L, 2L, 4L}) {
        std::cout << "t~^" << mt << ":\n";
        for (const auto& eq : evolution_equations(flow_tilde(kdv, mt)))
            std::cout << "  " << eq << "\n";
    }

    const auto bsq = build_lax(3);
    std::cout << "\nQ = " << bsq.op().str() << "\n";
    for (long mt : {1L, 3L}) {
        std::cout << "t~^" << mt << ":\n";
        for (const auto& eq : evolution_equations(flow_tilde(bsq, mt)))
            std::cout << "  " << eq << "\n";
    }

    const auto K2 = flow_tilde(kdv, 2).evolution;
    const auto K4 = flow_tilde(kdv, 4).evolution;
    const bool commute = evolutionary_derivative(K4.at(0), K2) == evolutionary_derivative(K2.at(0), K4);
    std::cout << "\nt~^2 and t~^4 flows commute: " << (commute ? "yes" : "no") << "\n";
    return commute ? 0 : 1;
}
