#include "transference/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <string>

#include "dft.hpp"
#include "moments.hpp"
#include "transference/errors.hpp"
#include "transference/parallel.hpp"

namespace transference {

namespace {

std::size_t int_pow(std::uint64_t base, std::size_t exponent) {
  std::size_t result = 1;
  for (std::size_t e = 0; e < exponent; ++e) result *= base;
  return result;
}

// Below this size the r = 2 kernels run as plain O(N^2) loops.
constexpr std::uint64_t kFftThreshold = 128;

void check_family(const TestFamily& u, const LinearForm& form) {
  if (u.arity() != form.arity()) throw ArityMismatch(form.arity(), u.arity());
  if (u.modulus() != form.modulus()) {
    throw PreconditionError("test family and form live on different groups");
  }
}

void check_pair(const WeightFn& g, const WeightFn& h, const LinearForm& form) {
  if (g.size() != form.modulus() || h.size() != form.modulus()) {
    throw PreconditionError("weight functions and form live on different groups");
  }
}

// Calls fn(y, psi(y)) for every y in G^r, y_0 varying slowest.
template <typename Fn>
void for_each_point(const LinearForm& form, Fn&& fn) {
  const Group& group = form.group();
  const std::size_t r = form.arity();
  const std::uint64_t n = group.modulus();
  const auto coeffs = form.coefficients();
  std::vector<Residue> y(r, 0);
  Residue value = 0;
  for (;;) {
    fn(std::span<const Residue>(y), value);
    std::size_t pos = r;
    while (pos > 0) {
      --pos;
      value = group.add(value, coeffs[pos]);
      if (++y[pos] < n) break;
      y[pos] = 0;  // value has wrapped through a full period of this slot
      if (pos == 0) return;
    }
  }
}

std::vector<double> difference(const WeightFn& g, const WeightFn& h) {
  std::vector<double> d(g.size());
  for (std::size_t x = 0; x < d.size(); ++x) d[x] = g[x] - h[x];
  return d;
}

// Cyclic correlation and convolution helpers on Z_N for the r = 2 kernels.
class CyclicKernels {
 public:
  explicit CyclicKernels(std::size_t n) : dft_(n), a_(n), b_(n), c_(n) {}

  /// Spectrum of a real signal.
  std::vector<std::complex<double>> spectrum(std::span<const double> signal) {
    std::vector<std::complex<double>> out(signal.size());
    for (std::size_t x = 0; x < signal.size(); ++x) a_[x] = signal[x];
    dft_.forward(a_, out);
    return out;
  }

  /// out(s) = sum_a h(a + s) v(a), given the spectrum of h.
  void correlate(std::span<const std::complex<double>> h_hat,
                 std::span<const double> v, std::span<double> out) {
    const std::size_t n = v.size();
    for (std::size_t x = 0; x < n; ++x) a_[x] = v[x];
    dft_.forward(a_, b_);
    for (std::size_t t = 0; t < n; ++t) b_[t] = h_hat[t] * std::conj(b_[t]);
    dft_.backward(b_, c_);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) out[s] = c_[s].real() * scale;
  }

  /// out(x) = sum_{a + b = x} p(a) q(b).
  void convolve(std::span<const double> p, std::span<const double> q,
                std::span<double> out) {
    const std::size_t n = p.size();
    for (std::size_t x = 0; x < n; ++x) a_[x] = p[x];
    dft_.forward(a_, b_);
    for (std::size_t x = 0; x < n; ++x) a_[x] = q[x];
    dft_.forward(a_, c_);
    for (std::size_t t = 0; t < n; ++t) b_[t] *= c_[t];
    dft_.backward(b_, c_);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t x = 0; x < n; ++x) out[x] = c_[x].real() * scale;
  }

 private:
  detail::Dft dft_;
  std::vector<std::complex<double>> a_, b_, c_;
};

// u_2 read through a = c_1 y_1 and u_1 through b = c_2 y_2, so that for r = 2
// psi(y) = a + b.
void relabel_for_r2(const LinearForm& form, std::span<const double> u_source,
                    std::size_t slot, std::vector<double>& out) {
  const Group& group = form.group();
  const std::uint64_t n = group.modulus();
  const Residue inv = *group.inverse(form.coefficients()[slot]);
  out.resize(n);
  for (Residue a = 0; a < n; ++a) out[a] = u_source[group.mul(inv, a)];
}

}  // namespace

TestFamily::TestFamily(std::size_t arity, std::uint64_t modulus,
                       std::vector<std::vector<double>> functions)
    : modulus_(modulus), functions_(std::move(functions)) {
  if (arity < 2) throw PreconditionError("test families need r >= 2");
  if (functions_.size() != arity) throw ArityMismatch(arity, functions_.size());
  face_size_ = int_pow(modulus, arity - 1);
  for (const auto& fn : functions_) {
    if (fn.size() != face_size_) {
      throw PreconditionError("test function has " + std::to_string(fn.size()) +
                              " entries, expected N^(r-1) = " +
                              std::to_string(face_size_));
    }
    for (double v : fn) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw PreconditionError("test function value outside [0, 1]");
      }
    }
  }
}

TestFamily TestFamily::constant(std::size_t arity, std::uint64_t modulus,
                                double value) {
  const std::size_t face = int_pow(modulus, arity - 1);
  return {arity, modulus,
          std::vector<std::vector<double>>(arity, std::vector<double>(face, value))};
}

TestFamily TestFamily::random(std::size_t arity, std::uint64_t modulus,
                              Stream& stream, bool binary) {
  const std::size_t face = int_pow(modulus, arity - 1);
  std::vector<std::vector<double>> functions(arity, std::vector<double>(face));
  for (auto& fn : functions) {
    for (double& v : fn) v = binary ? static_cast<double>(stream.next() >> 63) : stream.uniform();
  }
  return {arity, modulus, std::move(functions)};
}

std::size_t TestFamily::face_index(std::span<const Residue> y,
                                   std::size_t omit) const noexcept {
  std::size_t index = 0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (t == omit) continue;
    index = index * modulus_ + y[t];
  }
  return index;
}

double generalized_convolution(const TestFamily& u, const LinearForm& form,
                               Residue x) {
  check_family(u, form);
  const Group& group = form.group();
  const std::size_t r = form.arity();
  const std::uint64_t n = group.modulus();
  const auto coeffs = form.coefficients();
  const Residue lead_inverse = *group.inverse(coeffs[0]);
  x %= n;

  // Slots 1..r-1 run over G^{r-1}; slot 0 is solved from psi(y) = x.
  const std::size_t fiber = u.face_size();
  std::vector<Residue> y(r, 0);
  long double total = 0.0L;
  for (std::size_t code = 0; code < fiber; ++code) {
    std::size_t rest = code;
    for (std::size_t t = r; t-- > 1;) {
      y[t] = rest % n;
      rest /= n;
    }
    Residue partial = 0;
    for (std::size_t t = 1; t < r; ++t) partial = group.add(partial, group.mul(coeffs[t], y[t]));
    y[0] = group.mul(lead_inverse, group.sub(x, partial));
    double product = 1.0;
    for (std::size_t i = 0; i < r; ++i) product *= u[i][u.face_index(y, i)];
    total += product;
  }
  return static_cast<double>(total / static_cast<long double>(fiber));
}

std::vector<double> convolution_table(const TestFamily& u, const LinearForm& form) {
  check_family(u, form);
  const std::uint64_t n = form.modulus();
  const std::size_t r = form.arity();
  std::vector<double> table(n, 0.0);
  if (r == 2 && n >= kFftThreshold) {
    std::vector<double> a, b;
    relabel_for_r2(form, u[1], 0, a);
    relabel_for_r2(form, u[0], 1, b);
    CyclicKernels kernels(n);
    kernels.convolve(a, b, table);
    for (double& v : table) v /= static_cast<double>(n);
    return table;
  }
  std::vector<long double> acc(n, 0.0L);
  for_each_point(form, [&](std::span<const Residue> y, Residue value) {
    double product = 1.0;
    for (std::size_t i = 0; i < r; ++i) product *= u[i][u.face_index(y, i)];
    acc[value] += product;
  });
  const auto fiber = static_cast<long double>(u.face_size());
  for (std::size_t x = 0; x < n; ++x) table[x] = static_cast<double>(acc[x] / fiber);
  return table;
}

double discrepancy_signed(const WeightFn& g, const WeightFn& h,
                          const LinearForm& form, const TestFamily& u) {
  check_pair(g, h, form);
  const std::vector<double> table = convolution_table(u, form);
  long double total = 0.0L;
  for (std::size_t x = 0; x < table.size(); ++x) {
    total += static_cast<long double>(g[x] - h[x]) * table[x];
  }
  return static_cast<double>(total / static_cast<long double>(table.size()));
}

double discrepancy_value(const WeightFn& g, const WeightFn& h,
                         const LinearForm& form, const TestFamily& u) {
  return std::abs(discrepancy_signed(g, h, form, u));
}

std::string_view to_string(DiscrepancyMode mode) noexcept {
  switch (mode) {
    case DiscrepancyMode::fixed: return "fixed";
    case DiscrepancyMode::searched: return "searched";
    case DiscrepancyMode::bounded: return "bounded";
  }
  return "searched";
}

namespace {

// Partial derivatives of the multilinear objective
//   Phi(u) = N^{-r} sum_y d(psi(y)) prod_i u_i(y_{[r]\{i}})
// with respect to the entries of one u_i.
class Gradient {
 public:
  Gradient(const LinearForm& form, std::vector<double> d)
      : form_(form), d_(std::move(d)) {
    if (form_.arity() == 2 && form_.modulus() >= kFftThreshold) {
      kernels_ = std::make_unique<CyclicKernels>(form_.modulus());
      d_hat_ = kernels_->spectrum(d_);
    }
  }

  /// Writes dPhi/du_i into out (size N^{r-1}). Not thread safe; use one
  /// Gradient per worker.
  void compute(const std::vector<std::vector<double>>& u, std::size_t i,
               std::vector<double>& out) {
    const std::uint64_t n = form_.modulus();
    const std::size_t r = form_.arity();
    out.assign(u[i].size(), 0.0);
    if (kernels_) {
      // i = 0: d/du_1(y_2) = N^-2 sum_a d(a + c_2 y_2) u_2(a / c_1); i = 1 is
      // the mirror image.
      const std::size_t other = 1 - i;
      relabel_for_r2(form_, u[other], other == 1 ? 0 : 1, relabeled_);
      correlation_.resize(n);
      kernels_->correlate(d_hat_, relabeled_, correlation_);
      const Group& group = form_.group();
      const Residue coeff = form_.coefficients()[other == 1 ? 1 : 0];
      const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
      for (Residue z = 0; z < n; ++z) out[z] = correlation_[group.mul(coeff, z)] * scale;
      return;
    }
    std::vector<long double> acc(out.size(), 0.0L);
    for_each_point(form_, [&](std::span<const Residue> y, Residue value) {
      double w = d_[value];
      if (w == 0.0) return;
      for (std::size_t l = 0; l < r && w != 0.0; ++l) {
        if (l == i) continue;
        w *= u[l][face(y, l)];
      }
      acc[face(y, i)] += w;
    });
    const long double scale = std::pow(static_cast<long double>(n), static_cast<int>(r));
    for (std::size_t z = 0; z < out.size(); ++z) out[z] = static_cast<double>(acc[z] / scale);
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : d_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::size_t face(std::span<const Residue> y, std::size_t omit) const noexcept {
    std::size_t index = 0;
    for (std::size_t t = 0; t < y.size(); ++t) {
      if (t == omit) continue;
      index = index * form_.modulus() + y[t];
    }
    return index;
  }

  const LinearForm& form_;
  std::vector<double> d_;
  std::unique_ptr<CyclicKernels> kernels_;
  std::vector<std::complex<double>> d_hat_;
  std::vector<double> relabeled_;
  std::vector<double> correlation_;
};

struct AscentResult {
  std::vector<std::vector<double>> u;
  std::vector<double> trace;
  double value = 0.0;
  double signed_value = 0.0;
};

AscentResult ascend(Gradient& gradient, std::vector<std::vector<double>> u,
                    double sign, std::size_t max_sweeps, double tolerance) {
  AscentResult result;
  std::vector<double> partial;
  const std::size_t r = u.size();
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < r; ++i) {
      gradient.compute(u, i, partial);
      long double objective = 0.0L;
      for (std::size_t z = 0; z < partial.size(); ++z) {
        const double slope = sign * partial[z];
        // Zero slope (up to rounding) keeps the current value.
        double next = u[i][z];
        if (slope > tolerance) {
          next = 1.0;
        } else if (slope < -tolerance) {
          next = 0.0;
        }
        if (next != u[i][z]) {
          changed = true;
          u[i][z] = next;
        }
        objective += static_cast<long double>(partial[z]) * u[i][z];
      }
      result.trace.push_back(static_cast<double>(objective));
    }
    if (!changed) break;
  }
  result.u = std::move(u);
  return result;
}

}  // namespace

DiscrepancyReport discrepancy_search(const WeightFn& g, const WeightFn& h,
                                     const LinearForm& form,
                                     const SearchOptions& options) {
  check_pair(g, h, form);
  const std::size_t r = form.arity();
  const std::uint64_t n = form.modulus();
  const std::uint64_t restarts = std::max<std::uint64_t>(options.restarts, 1);
  const std::vector<double> d = difference(g, h);

  double max_d = 0.0;
  for (double v : d) max_d = std::max(max_d, std::abs(v));
  const double tolerance = 64.0 * std::numeric_limits<double>::epsilon() * max_d /
                           static_cast<double>(int_pow(n, r - 1));

  // Task 2q + s runs restart q with sign (+1, -1)[s].
  const std::size_t tasks = 2 * restarts;
  std::vector<AscentResult> results(tasks);
  parallel_for(tasks, [&](std::size_t task) {
    const std::uint64_t restart = task / 2;
    const double sign = task % 2 == 0 ? 1.0 : -1.0;
    Stream stream(options.seed, restart);
    std::vector<std::vector<double>> start = TestFamily::random(r, n, stream, true).functions();
    Gradient gradient(form, d);
    AscentResult result = ascend(gradient, std::move(start), sign,
                                 std::max<std::size_t>(options.max_sweeps, 1), tolerance);
    const TestFamily family(r, n, result.u);
    result.signed_value = discrepancy_signed(g, h, form, family);
    result.value = std::abs(result.signed_value);
    results[task] = std::move(result);
  });

  std::size_t best = 0;
  for (std::size_t task = 1; task < tasks; ++task) {
    if (results[task].value > results[best].value) best = task;
  }

  DiscrepancyReport report;
  report.value = results[best].value;
  report.signed_value = results[best].signed_value;
  report.epsilon_target = options.epsilon_target;
  report.form_index = form.omitted_index();
  report.mode = DiscrepancyMode::searched;
  report.witness.emplace(r, n, std::move(results[best].u));
  report.restarts = restarts;
  report.seed = options.seed;
  report.best_restart = best / 2;
  report.ascent_trace = std::move(results[best].trace);
  return report;
}

std::string_view to_string(BoundMode mode) noexcept {
  return mode == BoundMode::exact ? "exact" : "monte_carlo";
}

namespace {

// E_{x, h_1..h_r} prod_omega d(x + omega . h), by peeling one h at a time:
// the average over a of the same quantity for x -> d(x) d(x + a), down to the
// square of the mean.
long double cube_average(std::span<const double> d, std::size_t depth) {
  const std::size_t n = d.size();
  if (depth == 1) {
    long double sum = 0.0L;
    for (double v : d) sum += v;
    const long double m = sum / static_cast<long double>(n);
    return m * m;
  }
  std::vector<double> derivative(n);
  long double total = 0.0L;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t shifted = x + a < n ? x + a : x + a - n;
      derivative[x] = d[x] * d[shifted];
    }
    total += cube_average(derivative, depth - 1);
  }
  return total / static_cast<long double>(n);
}

}  // namespace

BoxNormBound box_norm_bound(const WeightFn& nu, const LinearForm& form,
                            double budget, std::uint64_t samples,
                            std::uint64_t seed) {
  if (nu.size() != form.modulus()) {
    throw PreconditionError("weight function and form live on different groups");
  }
  const Group& group = form.group();
  const std::size_t r = form.arity();
  const std::uint64_t n = group.modulus();
  std::vector<double> d(n);
  for (std::size_t x = 0; x < n; ++x) d[x] = nu[x] - 1.0;

  BoxNormBound bound;
  bound.form_index = form.omitted_index();
  const double exponent = std::ldexp(1.0, -static_cast<int>(r));
  const double work = std::pow(static_cast<double>(n), static_cast<double>(r));

  if (work <= budget) {
    // Substituting a_t = c_t x_t (units) turns the box average of d o psi
    // into the cube average of d itself. The outermost level runs in parallel.
    std::vector<long double> partial(n, 0.0L);
    parallel_for(n, [&](std::size_t a) {
      std::vector<double> derivative(n);
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t shifted = x + a < n ? x + a : x + a - n;
        derivative[x] = d[x] * d[shifted];
      }
      partial[a] = cube_average(derivative, r - 1);
    });
    long double total = 0.0L;
    for (long double p : partial) total += p;
    bound.raw = static_cast<double>(total / static_cast<long double>(n));
    bound.mode = BoundMode::exact;
    bound.samples = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 2.0 * r));
  } else {
    if (samples < 2) throw PreconditionError("Monte Carlo bound needs at least two samples");
    constexpr std::uint64_t chunk = 1 << 14;
    const std::uint64_t chunks = (samples + chunk - 1) / chunk;
    const auto coeffs = form.coefficients();
    const std::size_t corners = std::size_t{1} << r;
    std::vector<detail::Moments> moments(chunks);
    parallel_for(chunks, [&](std::size_t c) {
      Stream stream(seed, c);
      std::vector<Residue> x(2 * r);
      detail::Moments local;
      const std::uint64_t end = std::min(samples, (c + 1) * chunk);
      for (std::uint64_t s = c * chunk; s < end; ++s) {
        for (auto& v : x) v = stream.below(n);
        double product = 1.0;
        for (std::size_t omega = 0; omega < corners; ++omega) {
          Residue value = 0;
          for (std::size_t t = 0; t < r; ++t) {
            const Residue coordinate = x[2 * t + ((omega >> t) & 1U)];
            value = group.add(value, group.mul(coeffs[t], coordinate));
          }
          product *= d[value];
        }
        local.add(product);
      }
      moments[c] = local;
    });
    detail::Moments total;
    for (const auto& m : moments) total.merge(m);
    bound.raw = total.mean;
    bound.standard_error =
        std::sqrt(std::max(0.0, total.m2 / static_cast<double>(samples - 1)) /
                  static_cast<double>(samples));
    bound.mode = BoundMode::monte_carlo;
    bound.samples = samples;
  }
  bound.value = std::pow(std::max(bound.raw, 0.0), exponent);
  return bound;
}

TestFamily transport_witness(const TestFamily& u, int from_j, int to_j,
                             const Group& group) {
  const auto r = static_cast<std::size_t>(group.arity());
  if (u.arity() != r) throw ArityMismatch(r, u.arity());
  if (u.modulus() != group.modulus()) {
    throw PreconditionError("test family lives on a different group");
  }
  if (from_j == to_j) {
    (void)LinearForm(group, from_j);
    return u;
  }
  const std::vector<Residue> scale = scaling_map(from_j, to_j, group);
  const std::uint64_t n = group.modulus();
  std::vector<std::vector<double>> moved(r, std::vector<double>(u.face_size()));
  std::vector<Residue> y(r, 0);
  std::vector<Residue> scaled(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t z = 0; z < u.face_size(); ++z) {
      // Decode z into the coordinates other than slot i.
      std::size_t rest = z;
      for (std::size_t t = r; t-- > 0;) {
        if (t == i) continue;
        y[t] = rest % n;
        rest /= n;
      }
      for (std::size_t t = 0; t < r; ++t) scaled[t] = t == i ? 0 : group.mul(scale[t], y[t]);
      moved[i][z] = u[i][u.face_index(scaled, i)];
    }
  }
  return {r, n, std::move(moved)};
}

std::pair<double, double> product_closure_witness(const TestFamily& u,
                                                  const TestFamily& u_prime,
                                                  const LinearForm& form,
                                                  Residue x, std::uint64_t seed) {
  check_family(u, form);
  check_family(u_prime, form);
  const Group& group = form.group();
  const std::size_t r = form.arity();
  const std::uint64_t n = group.modulus();
  const auto coeffs = form.coefficients();
  const Residue lead_inverse = *group.inverse(coeffs[0]);
  x %= n;

  const double lhs = generalized_convolution(u, form, x) *
                     generalized_convolution(u_prime, form, x);

  // z ranges over the fiber psi(z) = 0: slots 1..r-1 free, slot 0 solved.
  const std::size_t fiber = u.face_size();
  const bool enumerate = fiber <= kClosureEnumerationLimit;
  const std::size_t draws = enumerate ? fiber : kClosureEnumerationLimit;
  Stream stream(seed, 0);

  std::vector<Residue> z(r, 0);
  std::vector<Residue> y(r, 0);
  std::vector<Residue> shifted(r, 0);
  std::vector<std::vector<double>> v(r, std::vector<double>(fiber));
  long double total = 0.0L;
  for (std::size_t draw = 0; draw < draws; ++draw) {
    std::size_t rest = draw;
    for (std::size_t t = r; t-- > 1;) {
      if (enumerate) {
        z[t] = rest % n;
        rest /= n;
      } else {
        z[t] = stream.below(n);
      }
    }
    Residue partial = 0;
    for (std::size_t t = 1; t < r; ++t) partial = group.add(partial, group.mul(coeffs[t], z[t]));
    z[0] = group.mul(lead_inverse, group.neg(partial));

    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t face = 0; face < fiber; ++face) {
        std::size_t code = face;
        for (std::size_t t = r; t-- > 0;) {
          if (t == i) continue;
          y[t] = code % n;
          code /= n;
        }
        for (std::size_t t = 0; t < r; ++t) shifted[t] = t == i ? 0 : group.add(y[t], z[t]);
        v[i][face] = u[i][face] * u_prime[i][u.face_index(shifted, i)];
      }
    }
    total += generalized_convolution(TestFamily(r, n, v), form, x);
  }
  const double rhs = static_cast<double>(total / static_cast<long double>(draws));
  return {lhs, rhs};
}

}  // namespace transference
