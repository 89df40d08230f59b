#include "zeitlin/dynamics.hpp"

#include "zeitlin/kernels.hpp"

#include <cmath>

namespace zeitlin {

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
    CMatrix out;
    kernels::commutator(a, b, out);
    return out;
}

CMatrix dns_vector_field(const BasisCache& basis, const CMatrix& w) {
    CMatrix p = solve_poisson(basis, w);
    CMatrix out;
    kernels::commutator_skew(p, w, out);
    return out;
}

CMatrix reduced_drift(const BasisCache& basis, const CMatrix& w_bar, int l_bar,
                      bool check_subspace) {
    if (check_subspace) {
        const CMatrix pw = project_large(basis, w_bar, l_bar);
        if ((pw - w_bar).frob_norm() > 1e-10 * std::max(w_bar.frob_norm(), 1e-300))
            throw degenerate_input("reduced_drift: state not in the l <= l_bar subspace");
    }
    CMatrix p = solve_poisson(basis, w_bar);
    CMatrix comm;
    kernels::commutator_skew(p, w_bar, comm);
    if (l_bar == basis.n() - 1) return comm;
    return project_large(basis, comm, l_bar);
}

NoiseAggregate build_noise_aggregates(const BasisCache& basis,
                                      const ModeIncrements& increments,
                                      int l_bar) {
    const int n = basis.n();
    if (increments.n != n || increments.l_bar != l_bar)
        throw size_mismatch("build_noise_aggregates: increment range mismatch");

    NoiseAggregate agg;
    agg.zero = increments.all_zero();
    if (agg.zero) {
        agg.q = CMatrix(n);
        agg.r = CMatrix(n);
        return agg;
    }

    CoeffField cr(n, n - 1);
    CoeffField cq(n, n - 1);
    increments.modes().for_each([&](int l, int m) {
        const double db = increments.at(l, m);
        if (db == 0.0) return;
        cr.at(l, m) = db;
        cq.at(l, m) = db / (-static_cast<double>(l) * (l + 1));
    });
    agg.r = synthesize(basis, cr);
    agg.q = synthesize(basis, cq);
    return agg;
}

CMatrix salt_diffusion(const BasisCache& basis, const CMatrix& w_bar,
                       const NoiseAggregate& agg, int l_bar) {
    require_same_size(w_bar, agg.q);
    CMatrix comm;
    kernels::commutator_skew(agg.q, w_bar, comm);
    return project_large(basis, comm, l_bar);
}

CMatrix epn_diffusion(const BasisCache& basis, const CMatrix& w_bar,
                      const NoiseAggregate& agg, int l_bar) {
    require_same_size(w_bar, agg.r);
    CMatrix p = solve_poisson(basis, w_bar);
    CMatrix comm;
    kernels::commutator_skew(p, agg.r, comm);
    return project_large(basis, comm, l_bar);
}

} // namespace zeitlin
