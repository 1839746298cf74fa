#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "omcorr/model.hpp"

namespace omcorr {

enum class BranchNote { unique, multistable_lowest };

std::string_view to_string(BranchNote b);
BranchNote branch_note_from_string(std::string_view s);

/// Uniform classical steady state (alpha_j = alpha, beta_j = beta for all j).
struct MeanFields {
    std::complex<double> alpha{0.0, 0.0};
    std::complex<double> beta{0.0, 0.0};
    double photon_number = 0.0;  ///< |alpha|^2
    bool converged = true;
    BranchNote branch_note = BranchNote::unique;
};

/// Solves the self-consistent mean fields
///
///   alpha = i eta / (Delta + i kappa + 2J + 2 g0 Re beta)
///   beta  = g0 |alpha|^2 / (omega_m - i gamma - 2K)
///
/// by reducing them to the real cubic P [(Delta + 2J + 2 g0 c P)^2 + kappa^2] = |eta|^2
/// in P = |alpha|^2 with c = g0 (omega_m - 2K) / ((omega_m - 2K)^2 + gamma^2).
/// Under optical multistability the lowest root (the one reached by ramping
/// the drive up from zero) is selected and flagged.
MeanFields solve_mean_fields(const LatticeParams& p);

/// All real roots P of the mean-field cubic, ascending. Empty for eta == 0.
std::vector<double> photon_number_roots(const LatticeParams& p);

/// Cubic residual P [(Delta + 2J + 2 g0 c P)^2 + kappa^2] - |eta|^2.
double photon_number_residual(const LatticeParams& p, double photon_number);

/// Detuning entering the drift matrix: Delta + 2 g0 Re beta.
double effective_detuning(const LatticeParams& p, const MeanFields& mf);

namespace detail {
/// Real roots of a x^3 + b x^2 + c x + d (a != 0), ascending, Newton-polished.
std::vector<double> real_cubic_roots(double a, double b, double c, double d);
}  // namespace detail

}  // namespace omcorr
