#include "gausskey/engines.hpp"

#include <cmath>
#include <vector>

#include "gausskey/rates.hpp"

namespace gausskey {

namespace {

constexpr double kMinProtocolMu = 1.0 + 1e-9;

// Alice keeps mode 0 of TMSV(mu); the channel acts on mode 1.
CovMat channel_output(const CanonicalChannel& ch, double mu) {
  return apply_channel(tmsv(mu), ch, 1);
}

double entropy_of(const CovMat& v, std::initializer_list<std::size_t> modes) {
  const std::vector<std::size_t> keep(modes);
  return von_neumann_entropy(partial_trace(v, keep));
}

}  // namespace

std::string_view to_string(PortModel m) {
  return m == PortModel::trusted ? "trusted" : "untrusted";
}

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::rci:
      return "rci";
    case Engine::ci:
      return "ci";
    case Engine::protocol:
      return "protocol";
  }
  return "?";
}

double rci_finite_mu(const CanonicalChannel& ch, double mu) {
  const CovMat ab = channel_output(ch, mu);
  return entropy_of(ab, {0}) - von_neumann_entropy(ab);
}

double ci_finite_mu(const CanonicalChannel& ch, double mu) {
  const CovMat ab = channel_output(ch, mu);
  return entropy_of(ab, {1}) - von_neumann_entropy(ab);
}

ProtocolRate protocol_rate_numeric(const CanonicalChannel& ch, double mu, PortModel ports,
                                   Quadrature basis) {
  if (!(mu >= kMinProtocolMu)) {
    throw Error(ErrorKind::Domain, "mu",
                "protocol_rate_numeric: mu must exceed 1 + 1e-9 for stable conditioning");
  }
  const Dilation dil = dilate(ch);

  // Modes: 0 A, 1 Bob, 2 e1', 3 e2, 4 vacuum -> after the beam splitter
  // mode 1 is Bob's kept port B1 and mode 4 the discarded port B2.
  const CovMat after_channel = apply_dilation(tmsv(mu), dil, 1);
  const std::size_t bs_modes[] = {1, 4};
  const CovMat global =
      apply_symplectic(tensor(after_channel, CovMat::vacuum(1)), balanced_beam_splitter(), bs_modes);

  const auto qa = static_cast<Eigen::Index>(basis == Quadrature::q ? 0 : 1);
  const auto qb = qa + 2;
  const double va = global(qa, qa);
  const double vb = global(qb, qb);
  const double cab = global(qa, qb);
  const double det = va * vb - cab * cab;
  const double mutual_information = 0.5 * std::log2(va * vb / det);

  std::vector<std::size_t> eve = {2, 3};
  if (ports == PortModel::untrusted) {
    eve.push_back(4);
  }
  std::vector<std::size_t> eve_and_bob = eve;
  eve_and_bob.push_back(1);

  const double s_eve = von_neumann_entropy(partial_trace(global, eve));
  const CovMat joint = partial_trace(global, eve_and_bob);
  const double s_eve_cond = von_neumann_entropy(homodyne_condition(joint, eve.size(), basis));
  const double chi = s_eve - s_eve_cond;

  return ProtocolRate{
      .mutual_information = mutual_information,
      .holevo_eve = chi,
      .eve_entropy = s_eve,
      .eve_conditional_entropy = s_eve_cond,
      .rate = mutual_information - chi,
  };
}

std::vector<ConvergenceRow> convergence(const CanonicalChannel& ch, std::span<const double> mus,
                                        Engine engine, PortModel ports) {
  double target = 0.0;
  switch (engine) {
    case Engine::rci:
      target = e_r_interior(ch);
      break;
    case Engine::ci:
      target = q1g_interior(ch);
      break;
    case Engine::protocol:
      target = r_rev_interior(ch);
      break;
  }
  std::vector<ConvergenceRow> rows;
  rows.reserve(mus.size());
  for (double mu : mus) {
    double value = 0.0;
    switch (engine) {
      case Engine::rci:
        value = rci_finite_mu(ch, mu);
        break;
      case Engine::ci:
        value = ci_finite_mu(ch, mu);
        break;
      case Engine::protocol:
        value = protocol_rate_numeric(ch, mu, ports).rate;
        break;
    }
    rows.push_back({mu, value, target, target - value});
  }
  return rows;
}

}  // namespace gausskey
