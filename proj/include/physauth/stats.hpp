#pragma once

// Closed-form covariances of the probe differences
//   H_A[k] - H_A[k-1] ~ CN(0, R)                       (same transmitter)
//   H_E[k] - H_A[k-1] ~ CN(Hbar_E - Hbar_A, G)         (independent variation)
// and their low/high coherence-bandwidth limits.

#include "physauth/channel.hpp"
#include "physauth/numerics.hpp"

namespace physauth {

enum class CovarianceKind { GeneralR, GeneralG, LowBcR, LowBcG, HighBcR, HighBcG };

/// r(m) for |m| <= M-1. For m != 0:
///   2 sigma_T^2 (1-a)(1-q) / (1 - q exp(-j 2 pi m / M)),  q = exp(-2 pi Bc / W)
/// and r(0) = 2(1-a) sigma_T^2 + 2 sigma_N^2. r(-m) = conj(r(m)).
cplx r_lag(long m, const ChannelParams& params);

/// Off-diagonal entries of G before the (1-a) factor: r(m) / (1-a), evaluated
/// directly so that a = 1 is well defined.
cplx g_lag(long m, const ChannelParams& params);

/// R = [r(m-n)], Toeplitz Hermitian, factored. Throws NotPositiveDefinite.
HermitianMatrix covariance_R(const ChannelParams& params);

/// G: diagonal 2 sigma_T^2 + 2 sigma_N^2, off-diagonal g_lag(m-n). Factored
/// when positive definite; left unfactored otherwise (sigma_N = 0 with flat
/// variation is rank deficient).
HermitianMatrix covariance_G(const ChannelParams& params);

/// R = (2(1-a) sigma_T^2 + 2 sigma_N^2) I
HermitianMatrix asymptotic_R_low_bc(const ChannelParams& params);
/// G = (2 sigma_T^2 + 2 sigma_N^2) I
HermitianMatrix asymptotic_G_low_bc(const ChannelParams& params);
/// R = 2 sigma_N^2 I + 2(1-a) sigma_T^2 * ones
HermitianMatrix asymptotic_R_high_bc(const ChannelParams& params);
/// G = 2 sigma_N^2 I + 2 sigma_T^2 * ones
HermitianMatrix asymptotic_G_high_bc(const ChannelParams& params);

HermitianMatrix build_covariance(CovarianceKind kind, const ChannelParams& params);

}  // namespace physauth
