// temporary benchmark for the elimination engine (not wired into ctest)
#include <chrono>
#include <cstdio>

#include "ptower/cohomology.hpp"
#include "ptower/finite_group.hpp"

using namespace ptower;

static void bench(const GroupPtr& g, const ModulePtr& m, int n) {
    auto t0 = std::chrono::steady_clock::now();
    auto h = cohomology_group(g, m, n);
    auto t1 = std::chrono::steady_clock::now();
    double dt = std::chrono::duration<double>(t1 - t0).count();
    Int order = 1;
    for (auto [p, e] : h->order_factors)
        for (int i = 0; i < e; ++i) order *= p;
    std::printf("H^%d(%s; |M|=%lld): order=%lld  [%.2fs]\n", n, g->name().c_str(), m->order(), order, dt);
    std::fflush(stdout);
}

int main(int argc, char** argv) {
    int maxn = argc > 1 ? std::atoi(argv[1]) : 3;
    int maxorder = argc > 2 ? std::atoi(argv[2]) : 8;

    auto z2 = cyclic_group(2);
    ModulePtr m2 = make_module(GModule::trivial(z2, FiniteAbelianGroup({2}), "Z2"));
    for (int n = 0; n <= 4; ++n) {
        auto h = cohomology_group(z2, m2, n);
        std::printf("H^%d(Z2;Z2) factors:", n);
        for (Int f : h->structure.factors()) std::printf(" %lld", f);
        std::printf("  (basis %zu)\n", h->basis.size());
        std::fflush(stdout);
    }

    auto d4 = dihedral_group(4);  // order 8
    ModulePtr z3_d4 = make_module(GModule::trivial(d4, FiniteAbelianGroup({3}), "Z3"));
    for (int n = 1; n <= maxn; ++n) bench(d4, z3_d4, n);

    if (maxorder >= 16) {
        auto d8 = dihedral_group(8);  // order 16
        ModulePtr z27 = make_module(GModule::trivial(d8, FiniteAbelianGroup({27}), "Z27"));
        ModulePtr z3cube = make_module(GModule::trivial(d8, FiniteAbelianGroup({3, 3, 3}), "Z3^3"));
        ModulePtr z9z3 = make_module(GModule::trivial(d8, FiniteAbelianGroup({3, 9}), "Z3+Z9"));
        for (int n = 1; n <= maxn; ++n) bench(d8, z27, n);
        for (int n = 1; n <= maxn; ++n) bench(d8, z3cube, n);
        for (int n = 1; n <= maxn; ++n) bench(d8, z9z3, n);
    }
    return 0;
}
