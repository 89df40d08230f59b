#pragma once

#include <cstdint>

#include "zeitlin/basis.hpp"
#include "zeitlin/noise.hpp"

namespace zeitlin {

enum class ClosureKind {
    full_dns,
    deterministic_reduced,
    salt_reduced,
    energy_preserving_reduced,
};

inline bool is_reduced(ClosureKind k) { return k != ClosureKind::full_dns; }
inline bool is_stochastic(ClosureKind k) {
    return k == ClosureKind::salt_reduced ||
           k == ClosureKind::energy_preserving_reduced;
}

/// [a, b] = ab - ba
CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Full vector field [P, W] with Laplacian(P) = W.
CMatrix dns_vector_field(const BasisCache& basis, const CMatrix& w);

/// Reduced drift pi[P_bar, W_bar]. The input must already lie in the
/// large-scale subspace; with check_subspace the precondition is verified
/// (costs one extra projection).
CMatrix reduced_drift(const BasisCache& basis, const CMatrix& w_bar, int l_bar,
                      bool check_subspace = false);

/// The per-step noise sums collapse by bilinearity: with
///   r = sum dB^lm T_lm   and   q = sum dB^lm T_lm / (-l(l+1)),
/// the aggregate diffusions pi[q, W_bar] and pi[P_bar, r] equal the
/// mode-by-mode sums of Eqs. with one synthesis + one commutator per step.
struct NoiseAggregate {
    CMatrix q;       // stream-weighted aggregate
    CMatrix r;       // plain aggregate
    double h = 0.0;
    uint64_t seed = 0;
    uint64_t step = 0;
    bool zero = true; // all increments were exactly zero
};

NoiseAggregate build_noise_aggregates(const BasisCache& basis,
                                      const ModeIncrements& increments,
                                      int l_bar);

/// Enstrophy-tangent transport noise: pi[q, W_bar].
CMatrix salt_diffusion(const BasisCache& basis, const CMatrix& w_bar,
                       const NoiseAggregate& agg, int l_bar);

/// Energy-tangent noise: pi[P_bar, r] with Laplacian(P_bar) = W_bar.
CMatrix epn_diffusion(const BasisCache& basis, const CMatrix& w_bar,
                      const NoiseAggregate& agg, int l_bar);

} // namespace zeitlin
