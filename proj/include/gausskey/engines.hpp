#pragma once

// First-principles coherent-information and protocol-rate engines at finite
// source squeezing. They share no code with the closed forms in rates.hpp and
// serve as their numerical cross-check.

#include <span>
#include <string_view>
#include <vector>

#include "gausskey/channel.hpp"

namespace gausskey {

/// Reverse coherent information S(A) - S(AB) with the channel acting on one
/// half of TMSV(mu). May be negative.
double rci_finite_mu(const CanonicalChannel& ch, double mu);
/// Coherent information S(B) - S(AB) for the same state.
double ci_finite_mu(const CanonicalChannel& ch, double mu);

/// Whether the vacuum port discarded at Bob's balanced beam splitter is
/// excluded from (trusted) or handed to (untrusted) the eavesdropper.
enum class PortModel { trusted, untrusted };

std::string_view to_string(PortModel m);

struct ProtocolRate {
  double mutual_information;  // I(x_A : x_B1), bits
  double holevo_eve;          // chi(E : x_B1), bits
  double eve_entropy;         // S(E) before Bob's measurement
  double eve_conditional_entropy;
  double rate;                // mutual_information - holevo_eve
};

/// Reverse-reconciliation rate of the homodyne protocol: TMSV(mu) source,
/// channel dilation, balanced beam splitter with vacuum at Bob, homodyne of
/// `basis` on the kept port by Bob and on mode A by Alice. Class C only.
ProtocolRate protocol_rate_numeric(const CanonicalChannel& ch, double mu, PortModel ports,
                                   Quadrature basis = Quadrature::q);

enum class Engine { rci, ci, protocol };

std::string_view to_string(Engine e);

struct ConvergenceRow {
  double mu;
  double value;
  double target;  // closed-form interior (mu -> infinity)
  double gap;     // target - value
};

std::vector<ConvergenceRow> convergence(const CanonicalChannel& ch, std::span<const double> mus,
                                        Engine engine, PortModel ports = PortModel::trusted);

}  // namespace gausskey
