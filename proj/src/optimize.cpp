#include "entdist/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

namespace entdist {

int worker_count() {
  if (const char* env = std::getenv("ENTDIST_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

uint64_t splitmix64_next(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  uint64_t s = seed ^ (0x632be59bd9b4e019ull + stream * 0x9e3779b97f4a7c15ull);
  splitmix64_next(s);
  return splitmix64_next(s);
}

NelderMeadResult nelder_mead_max(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  int evals = 0;
  auto neg = [&](const Eigen::VectorXd& x) {
    ++evals;
    return -f(x);
  };

  std::vector<Eigen::VectorXd> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 0; i < n; ++i) xs[i + 1][i] += opts.initial_step;
  for (int i = 0; i <= n; ++i) fs[i] = neg(xs[i]);

  auto order = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::vector<Eigen::VectorXd> xs2(n + 1);
    std::vector<double> fs2(n + 1);
    for (int i = 0; i <= n; ++i) {
      xs2[i] = xs[idx[i]];
      fs2[i] = fs[idx[i]];
    }
    xs.swap(xs2);
    fs.swap(fs2);
  };

  order();
  while (evals < opts.max_iter) {
    if (std::abs(fs[n] - fs[0]) <= opts.tol) break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += xs[i];
    centroid /= n;

    Eigen::VectorXd xr = centroid + (centroid - xs[n]);
    double fr = neg(xr);
    if (fr < fs[0]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[n]);
      double fe = neg(xe);
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * (xs[n] - centroid);
      double fc = neg(xc);
      if (fc < fs[n]) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
          fs[i] = neg(xs[i]);
        }
      }
    }
    order();
  }

  NelderMeadResult res;
  res.x = xs[0];
  res.value = -fs[0];
  res.evals = evals;
  return res;
}

int density_param_count(int d) { return d * d; }

Mat density_from_params(const Eigen::VectorXd& x, int d) {
  if (x.size() != d * d) throw std::invalid_argument("density_from_params: bad parameter count");
  Mat l = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) l(i, i) = x[i];
  int k = d;
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j) {
      l(i, j) = Complex(x[k], x[k + 1]);
      k += 2;
    }
  Mat rho = l * l.adjoint();
  double tr = rho.trace().real();
  if (tr < 1e-14) return Mat::Identity(d, d) / static_cast<double>(d);
  rho /= tr;
  return 0.5 * (rho + rho.adjoint().eval());
}

Eigen::VectorXd params_maximally_mixed(int d) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d * d);
  for (int i = 0; i < d; ++i) x[i] = 1.0 / std::sqrt(static_cast<double>(d));
  return x;
}

Eigen::VectorXd params_entangled_marginal(int d) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d * d);
  for (int i = 0; i < d; ++i) x[i] = 1.0;
  return x;
}

Eigen::VectorXd params_near_pure(int d) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d * d);
  x[0] = 1.0;
  for (int i = 1; i < d; ++i) x[i] = 0.05;
  return x;
}

InputSearchResult maximize_over_inputs(
    int d, const std::function<std::function<double(const Mat&)>()>& objective_factory,
    const NelderMeadOptions& opts, int n_random_starts, uint64_t seed) {
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(params_maximally_mixed(d));
  starts.push_back(params_entangled_marginal(d));
  starts.push_back(params_near_pure(d));
  for (int r = 0; r < n_random_starts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(r)));
    std::normal_distribution<double> gauss(0.0, 0.7);
    Eigen::VectorXd x(density_param_count(d));
    for (int i = 0; i < x.size(); ++i) x[i] = gauss(rng);
    starts.push_back(std::move(x));
  }

  const int n = static_cast<int>(starts.size());
  std::vector<NelderMeadResult> results(n);
  parallel_for(n, [&](int i) {
    auto obj = objective_factory();
    auto wrapped = [&obj, d](const Eigen::VectorXd& x) { return obj(density_from_params(x, d)); };
    results[i] = nelder_mead_max(wrapped, starts[i], opts);
  });

  int best = 0;
  for (int i = 1; i < n; ++i)
    if (results[i].value > results[best].value) best = i;

  InputSearchResult out;
  out.value = results[best].value;
  out.input = density_from_params(results[best].x, d);
  out.start_index = best;
  return out;
}

}  // namespace entdist
