#pragma once

#include <complex>

#include "essmin/greens.hpp"

namespace essmin {

/// A point of the upper half plane, optionally reduced to the standard
/// fundamental domain |Re tau| <= 1/2, |tau| >= 1.
struct UpperHalfPoint {
  cplx tau;
  bool reduced = false;
};

UpperHalfPoint reduce(cplx tau);
bool in_fundamental_domain(cplx tau, double slack = 1e-12);

/// j(tau) from the q-expansion. Throws NotReduced if Im tau < 1/2 and the
/// point is not marked reduced.
cplx j_value(const UpperHalfPoint& p);
/// j(tau) for any tau in the upper half plane (reduces first).
cplx j_of(cplx tau);
/// dj/dtau = -2 pi i E6 j / E4.
cplx j_derivative(cplx tau);

/// tau in the fundamental domain with j(tau) = z; residual
/// |j(tau) - z| <= 1e-9 (1 + |z|). Throws NonConvergence.
UpperHalfPoint inverse_j(cplx z);

/// log |Delta(tau)|, computed in the log domain.
double log_abs_delta(cplx tau);
/// Petersson norm |Delta(tau)| (4 pi Im tau)^6 and its logarithm.
double delta_pet(cplx tau);
double log_delta_pet(cplx tau);

/// g_hyp(z) = -log ||Delta(tau_z)||_Pet with j(tau_z) = z. Its enclosures are
/// sampled, not rigorous, so certificates through it are heuristic.
GreenFunction g_hyp();

}  // namespace essmin
