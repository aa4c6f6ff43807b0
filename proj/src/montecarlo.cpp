#include "entdist/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "entdist/entropy.hpp"
#include "entdist/optimize.hpp"
#include "entdist/protocols.hpp"

namespace entdist {

SimReport simulate_erasure_protocol(double p1, double p2, int d, long long n, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("simulate_erasure_protocol: n must be >= 1");
  double analytic = erasure_capacity(p1, p2, d);

  constexpr long long kChunk = 8192;
  const long long n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<long long> hits(static_cast<std::size_t>(n_chunks), 0);
  parallel_for(static_cast<int>(n_chunks), [&](int c) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(c)));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const long long lo = static_cast<long long>(c) * kChunk;
    const long long hi = std::min(n, lo + kChunk);
    long long h = 0;
    for (long long i = lo; i < hi; ++i) {
      bool erased1 = u01(rng) < p1;
      bool erased2 = u01(rng) < p2;
      if (!erased1 && !erased2) ++h;
    }
    hits[static_cast<std::size_t>(c)] = h;
  });
  long long total = 0;
  for (long long h : hits) total += h;

  const double log2_d = std::log2(static_cast<double>(d));
  const double phat = static_cast<double>(total) / static_cast<double>(n);
  SimReport rep;
  rep.n_uses = n;
  rep.success_prob_hat = phat;
  rep.empirical_rate = phat * log2_d;
  rep.std_err = std::sqrt(std::max(0.0, phat * (1.0 - phat) / static_cast<double>(n))) * log2_d;
  rep.analytic_rate = analytic;
  rep.seed = seed;
  return rep;
}

namespace {

// Apply a 2x2 operator to qubit q of a 2^m-amplitude vector; subsystem 0 is
// the most significant bit (tensor concatenation order).
void apply_qubit_op(std::vector<Complex>& amps, int m, int q, const Mat& k) {
  const std::size_t dim = amps.size();
  const std::size_t mask = std::size_t{1} << (m - 1 - q);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    if (idx & mask) continue;
    Complex a0 = amps[idx], a1 = amps[idx | mask];
    amps[idx] = k(0, 0) * a0 + k(0, 1) * a1;
    amps[idx | mask] = k(1, 0) * a0 + k(1, 1) * a1;
  }
}

double norm_sq(const std::vector<Complex>& amps) {
  double s = 0.0;
  for (const Complex& a : amps) s += std::norm(a);
  return s;
}

}  // namespace

MultirailBlock run_multirail_block(const QuantumChannel& side1, const QuantumChannel& side2, int k,
                                   std::mt19937_64& rng) {
  const int m = 2 * k;  // qubits: side-1 rails then side-2 rails
  const std::size_t dim = std::size_t{1} << m;
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::vector<Complex> amps(dim, Complex(0, 0));
  const double a = 1.0 / std::sqrt(static_cast<double>(k));
  for (int j = 0; j < k; ++j) {
    std::size_t idx = (std::size_t{1} << (m - 1 - j)) | (std::size_t{1} << (m - 1 - (k + j)));
    amps[idx] = a;
  }

  // exact per-use Kraus branch sampling
  std::vector<Complex> branch(dim);
  for (int q = 0; q < m; ++q) {
    const QuantumChannel& ch = (q < k) ? side1 : side2;
    double u = u01(rng);
    double acc = 0.0;
    bool applied = false;
    for (std::size_t i = 0; i < ch.kraus.size(); ++i) {
      branch = amps;
      apply_qubit_op(branch, m, q, ch.kraus[i]);
      double w = norm_sq(branch);
      acc += w;
      if (u < acc || i + 1 == ch.kraus.size()) {
        double inv = 1.0 / std::sqrt(std::max(w, 1e-300));
        for (std::size_t x = 0; x < dim; ++x) amps[x] = branch[x] * inv;
        applied = true;
        break;
      }
    }
    if (!applied) throw std::logic_error("multirail block: branch sampling failed");
  }

  // one-particle-sector projection on both sides
  double s = 0.0;
  std::vector<std::size_t> sector_idx;
  sector_idx.reserve(static_cast<std::size_t>(k) * k);
  for (int j1 = 0; j1 < k; ++j1)
    for (int j2 = 0; j2 < k; ++j2) {
      std::size_t idx =
          (std::size_t{1} << (m - 1 - j1)) | (std::size_t{1} << (m - 1 - (k + j2)));
      sector_idx.push_back(idx);
      s += std::norm(amps[idx]);
    }

  MultirailBlock out;
  if (u01(rng) >= s) return out;  // post-selection failed
  out.success = true;

  Vec compressed(k * k);
  const double inv = 1.0 / std::sqrt(s);
  for (int j1 = 0; j1 < k; ++j1)
    for (int j2 = 0; j2 < k; ++j2)
      compressed[j1 * k + j2] = amps[sector_idx[j1 * k + j2]] * inv;

  DensityMatrix post = DensityMatrix::from_pure(compressed, {k, k});
  double s_ab = von_neumann_entropy(post);
  double s_b = von_neumann_entropy(partial_trace(post, {1}));
  double s_a = von_neumann_entropy(partial_trace(post, {0}));
  out.hashing_rate = std::max({s_b - s_ab, s_a - s_ab, 0.0});

  Complex overlap(0, 0);
  const double b = 1.0 / std::sqrt(static_cast<double>(k));
  for (int j = 0; j < k; ++j) overlap += b * compressed[j * k + j];
  out.fidelity_phi_k = std::norm(overlap);
  return out;
}

SimReport simulate_multirail(double gamma1, double gamma2, double t1, double t2, int k,
                             long long n_blocks, uint64_t seed) {
  if (k < 2 || k > 6) throw std::invalid_argument("simulate_multirail: k out of [2,6]");
  if (n_blocks < 1) throw std::invalid_argument("simulate_multirail: n_blocks must be >= 1");

  ChannelParams cp1{ChannelKind::Gadc};
  cp1.gamma = gamma1;
  cp1.T = t1;
  ChannelParams cp2{ChannelKind::Gadc};
  cp2.gamma = gamma2;
  cp2.T = t2;
  QuantumChannel ch1 = make_channel(cp1), ch2 = make_channel(cp2);

  std::vector<double> rates(static_cast<std::size_t>(n_blocks), 0.0);
  std::vector<unsigned char> succ(static_cast<std::size_t>(n_blocks), 0);
  parallel_for(static_cast<int>(n_blocks), [&](int b) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(b)));
    MultirailBlock blk = run_multirail_block(ch1, ch2, k, rng);
    succ[static_cast<std::size_t>(b)] = blk.success ? 1 : 0;
    rates[static_cast<std::size_t>(b)] = blk.success ? blk.hashing_rate / k : 0.0;
  });

  double mean = 0.0;
  long long n_succ = 0;
  for (long long b = 0; b < n_blocks; ++b) {
    mean += rates[static_cast<std::size_t>(b)];
    n_succ += succ[static_cast<std::size_t>(b)];
  }
  mean /= static_cast<double>(n_blocks);
  double var = 0.0;
  for (long long b = 0; b < n_blocks; ++b) {
    double d = rates[static_cast<std::size_t>(b)] - mean;
    var += d * d;
  }
  var = n_blocks > 1 ? var / static_cast<double>(n_blocks - 1) : 0.0;

  SimReport rep;
  rep.n_uses = n_blocks;
  rep.empirical_rate = mean;
  rep.std_err = std::sqrt(var / static_cast<double>(n_blocks));
  rep.success_prob_hat = static_cast<double>(n_succ) / static_cast<double>(n_blocks);
  rep.analytic_rate = multirail_rate(gamma1, gamma2, t1, t2, k);
  rep.seed = seed;
  return rep;
}

double simulate_teleportation_check(const ChannelParams& cp, int n_inputs, uint64_t seed) {
  if (n_inputs < 1) throw std::invalid_argument("simulate_teleportation_check: n_inputs must be >= 1");
  QuantumChannel ch = make_channel(cp);
  TeleportCovariance cov = teleportation_covariance(ch);
  if (!cov.covariant)
    throw std::invalid_argument("simulate_teleportation_check: channel is not teleportation-covariant");

  const int d = ch.in_dim;
  std::vector<double> dists(static_cast<std::size_t>(n_inputs), 0.0);
  parallel_for(n_inputs, [&](int t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(t)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = Complex(gauss(rng), gauss(rng));
    v /= v.norm();
    DensityMatrix input = DensityMatrix::from_pure(v, {d});

    auto outcomes = teleport_outcomes(ch, input, cov);
    // sample one outcome explicitly, then form the probability-weighted average
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double u = u01(rng), acc = 0.0;
    std::size_t picked = outcomes.size() - 1;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      acc += outcomes[i].prob;
      if (u < acc) {
        picked = i;
        break;
      }
    }
    DensityMatrix direct = apply(ch, input, 0);
    Mat sampled = outcomes[picked].corrected / outcomes[picked].prob;
    double sampled_dist = 0.5 * trace_norm(sampled - direct.mat());

    Mat avg = Mat::Zero(ch.out_dim, ch.out_dim);
    for (const auto& oc : outcomes) avg += oc.corrected;
    double avg_dist = 0.5 * trace_norm(avg - direct.mat());
    dists[static_cast<std::size_t>(t)] = std::max(sampled_dist, avg_dist);
  });

  double worst = 0.0;
  for (double v : dists) worst = std::max(worst, v);
  return worst;
}

}  // namespace entdist
