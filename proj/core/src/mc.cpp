#include "haarint/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "haarint/haar.hpp"

namespace haarint {

namespace {

struct ChunkPartial {
  std::complex<double> sum{0.0, 0.0};
  double sum_abs_sq = 0.0;
  std::size_t count = 0;
  std::size_t first_bad = static_cast<std::size_t>(-1);
};

// fn(chunk_index, count) evaluates one chunk; partials are combined
// pairwise in chunk order so the result does not depend on scheduling.
template <typename ChunkFn>
MCEstimate run_partials(const ChunkFn& fn, std::size_t n_samples,
                        RngStream stream, double log_shift) {
  if (n_samples < 2)
    throw std::invalid_argument("monte carlo: n_samples >= 2 required");
  const std::size_t n_chunks = (n_samples + kMCChunk - 1) / kMCChunk;
  std::vector<ChunkPartial> partials(n_chunks);

  const unsigned workers =
      std::max(1u, std::min<unsigned>(worker_count(),
                                      static_cast<unsigned>(n_chunks)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      const std::size_t count =
          std::min(kMCChunk, n_samples - c * kMCChunk);
      partials[c] = fn(static_cast<std::uint64_t>(c), count);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (std::size_t c = 0; c < n_chunks; ++c)
    if (partials[c].first_bad != static_cast<std::size_t>(-1))
      throw std::runtime_error(
          "integrand returned a non-finite value at sample " +
          std::to_string(c * kMCChunk + partials[c].first_bad));

  // pairwise reduction in fixed order
  std::vector<ChunkPartial> level = std::move(partials);
  while (level.size() > 1) {
    std::vector<ChunkPartial> up((level.size() + 1) / 2);
    for (std::size_t i = 0; i < up.size(); ++i) {
      up[i] = level[2 * i];
      if (2 * i + 1 < level.size()) {
        up[i].sum += level[2 * i + 1].sum;
        up[i].sum_abs_sq += level[2 * i + 1].sum_abs_sq;
        up[i].count += level[2 * i + 1].count;
      }
    }
    level = std::move(up);
  }

  const ChunkPartial& total = level[0];
  MCEstimate est;
  est.n_samples = total.count;
  est.stream = stream;
  est.log_shift = log_shift;
  est.mean = total.sum / static_cast<double>(total.count);
  const double n = static_cast<double>(total.count);
  double var = (total.sum_abs_sq - n * std::norm(est.mean)) / (n - 1.0);
  var = std::max(var, 0.0);
  est.std_error = std::sqrt(var / n);
  return est;
}

void accumulate(ChunkPartial& p, std::complex<double> v, std::size_t idx) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    if (p.first_bad == static_cast<std::size_t>(-1)) p.first_bad = idx;
    return;
  }
  p.sum += v;
  p.sum_abs_sq += std::norm(v);
  ++p.count;
}

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("HAARINT_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

MCEstimate run_chunked(const std::function<std::complex<double>(Rng&)>& fn,
                       std::size_t n_samples, RngStream stream) {
  return run_partials(
      [&](std::uint64_t chunk, std::size_t count) {
        Rng rng(stream, chunk);
        ChunkPartial p;
        for (std::size_t s = 0; s < count; ++s) accumulate(p, fn(rng), s);
        return p;
      },
      n_samples, stream, 0.0);
}

MCEstimate integrate_single(const IntegrandSpec& f, int n, int q,
                            std::size_t n_samples, RngStream stream) {
  if (q < 1 || q > n) throw std::invalid_argument("integrate_single: q <= N required");
  if (!f.can_eval_single())
    throw std::invalid_argument("integrate_single: pair integrand");
  return run_chunked(
      [&f, n, q](Rng& rng) { return f.eval(sample_block(n, q, rng), n); },
      n_samples, stream);
}

MCEstimate integrate_double(const IntegrandSpec& g, int n, int q,
                            std::size_t n_samples, RngStream stream,
                            std::optional<double> log_shift) {
  if (q < 1 || 2 * q > n)
    throw std::invalid_argument("integrate_double: N >= 2q required");
  if (!g.can_eval_pair())
    throw std::invalid_argument("integrate_double: pair integrand required");

  double shift = 0.0;
  if (g.is_shifted_exponential()) {
    if (log_shift) {
      shift = *log_shift;
    } else {
      // auto-probe: largest log integrand over a handful of draws from a
      // dedicated substream, so plain averaging cannot overflow
      Rng probe_a(stream, ~std::uint64_t{0});
      Rng probe_b(stream, ~std::uint64_t{0} - 1);
      for (int s = 0; s < 64; ++s) {
        const ComplexMatrix a = sample_block(n, q, probe_a);
        const ComplexMatrix b = sample_block(n, q, probe_b);
        shift = std::max(shift, g.log_eval_pair(a, b, n));
      }
    }
  }

  return run_partials(
      [&](std::uint64_t chunk, std::size_t count) {
        // independent streams for the two unitary factors
        Rng rng_a(stream, 2 * chunk);
        Rng rng_b(stream, 2 * chunk + 1);
        ChunkPartial p;
        for (std::size_t s = 0; s < count; ++s) {
          const ComplexMatrix a = sample_block(n, q, rng_a);
          const ComplexMatrix b = sample_block(n, q, rng_b);
          if (g.is_shifted_exponential())
            accumulate(p, std::exp(g.log_eval_pair(a, b, n) - shift), s);
          else
            accumulate(p, g.eval_pair(a, b, n), s);
        }
        return p;
      },
      n_samples, stream, shift);
}

MCEstimate moment_monomial(const MomentPattern& pattern, int n,
                           std::size_t n_samples, RngStream stream) {
  pattern.check_range(n);
  if (!pattern.balanced()) {
    // phase invariance forces the moment to vanish exactly
    MCEstimate zero;
    zero.stream = stream;
    return zero;
  }
  // only the leading columns up to the largest column index are needed
  const int cols = pattern.max_col() + 1;
  const IntegrandSpec f = IntegrandSpec::monomial(pattern);
  return run_chunked(
      [&](Rng& rng) {
        const ComplexMatrix u = sample_stiefel(n, cols, rng);
        return f.eval(u, n);
      },
      n_samples, stream);
}

}  // namespace haarint
