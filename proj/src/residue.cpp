#include "transference/residue.hpp"

#include <string>

#include "transference/errors.hpp"

namespace transference {

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Group Group::make(std::uint64_t modulus, int ap_length) {
  if (modulus < 1) {
    throw PreconditionError("modulus must be at least 1");
  }
  if (ap_length < 3) {
    throw PreconditionError("progression length must be at least 3, got " +
                            std::to_string(ap_length));
  }
  if (modulus >= (std::uint64_t{1} << 62)) {
    throw PreconditionError("modulus too large");
  }
  // gcd(N, (k-1)!) = 1 iff gcd(N, m) = 1 for each m < k.
  for (int m = 2; m < ap_length; ++m) {
    if (gcd(modulus, static_cast<std::uint64_t>(m)) != 1) {
      throw CoprimalityViolation(modulus, static_cast<std::uint64_t>(m));
    }
  }
  return Group(modulus, ap_length);
}

Residue Group::reduce(std::int64_t value) const noexcept {
  const auto n = static_cast<std::int64_t>(modulus_);
  std::int64_t r = value % n;
  if (r < 0) r += n;
  return static_cast<Residue>(r);
}

Residue Group::add(Residue a, Residue b) const noexcept {
  const Residue s = a + b;
  return s >= modulus_ ? s - modulus_ : s;
}

Residue Group::sub(Residue a, Residue b) const noexcept {
  return a >= b ? a - b : a + modulus_ - b;
}

Residue Group::mul(Residue a, Residue b) const noexcept {
  return static_cast<Residue>(static_cast<unsigned __int128>(a) * b %
                              modulus_);
}

Residue Group::neg(Residue a) const noexcept {
  return a == 0 ? 0 : modulus_ - a;
}

std::optional<Residue> Group::inverse(Residue a) const noexcept {
  if (modulus_ == 1) return Residue{0};
  // Extended Euclid on (a, N) tracking the coefficient of a.
  std::int64_t old_r = static_cast<std::int64_t>(a % modulus_);
  std::int64_t r = static_cast<std::int64_t>(modulus_);
  std::int64_t old_s = 1;
  std::int64_t s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) return std::nullopt;
  return reduce(old_s);
}

LinearForm::LinearForm(const Group& group, int omitted_index)
    : omitted_index_(omitted_index), group_(group) {
  const int k = group.ap_length();
  if (omitted_index < 1 || omitted_index > k) {
    throw PreconditionError("form index " + std::to_string(omitted_index) +
                            " outside [1, " + std::to_string(k) + "]");
  }
  coefficients_.reserve(static_cast<std::size_t>(k - 1));
  for (int i = 1; i <= k; ++i) {
    if (i == omitted_index) continue;
    coefficients_.push_back(group.reduce(i - omitted_index));
  }
}

int LinearForm::slot_index(std::size_t slot) const noexcept {
  const int i = static_cast<int>(slot) + 1;
  return i < omitted_index_ ? i : i + 1;
}

Residue LinearForm::operator()(std::span<const Residue> x) const {
  if (x.size() != coefficients_.size()) {
    throw ArityMismatch(coefficients_.size(), x.size());
  }
  const std::uint64_t n = group_.modulus();
  Residue acc = 0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    acc = group_.add(acc, group_.mul(coefficients_[t], x[t] % n));
  }
  return acc;
}

Residue psi(const LinearForm& form, std::span<const Residue> x) {
  return form(x);
}

std::vector<LinearForm> all_forms(const Group& group) {
  std::vector<LinearForm> forms;
  forms.reserve(static_cast<std::size_t>(group.ap_length()));
  for (int j = 1; j <= group.ap_length(); ++j) forms.emplace_back(group, j);
  return forms;
}

std::vector<Residue> scaling_map(int from_j, int to_j, const Group& group) {
  const LinearForm from(group, from_j);
  const LinearForm to(group, to_j);
  std::vector<Residue> multipliers(from.arity());
  for (std::size_t t = 0; t < multipliers.size(); ++t) {
    // Units by the Group invariant, so the inverse always exists.
    const Residue inv = *group.inverse(from.coefficients()[t]);
    multipliers[t] = group.mul(inv, to.coefficients()[t]);
  }
  return multipliers;
}

}  // namespace transference
