#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace transference {

/// Canonical representative of a class of Z_N, always in [0, N).
using Residue = std::uint64_t;

/// The cyclic group Z_N together with the progression length k.
///
/// Construction enforces gcd(N, m) = 1 for every m in {2, ..., k-1}, which is
/// what makes every coefficient (i - j) of the forms below a unit.
class Group {
 public:
  /// Throws CoprimalityViolation naming the smallest offending m, or
  /// PreconditionError when N < 1 or k < 3.
  static Group make(std::uint64_t modulus, int ap_length);

  std::uint64_t modulus() const noexcept { return modulus_; }
  int ap_length() const noexcept { return ap_length_; }
  /// Number of variables of each linear form, k - 1.
  int arity() const noexcept { return ap_length_ - 1; }

  Residue reduce(std::int64_t value) const noexcept;
  Residue add(Residue a, Residue b) const noexcept;
  Residue sub(Residue a, Residue b) const noexcept;
  Residue mul(Residue a, Residue b) const noexcept;
  Residue neg(Residue a) const noexcept;
  /// Multiplicative inverse, or nullopt when a is not a unit.
  std::optional<Residue> inverse(Residue a) const noexcept;

  friend bool operator==(const Group&, const Group&) = default;

 private:
  Group(std::uint64_t modulus, int ap_length)
      : modulus_(modulus), ap_length_(ap_length) {}

  std::uint64_t modulus_;
  int ap_length_;
};

inline Group make_group(std::uint64_t modulus, int ap_length) {
  return Group::make(modulus, ap_length);
}

/// psi_j(x) = sum over i in [k]\{j} of (i - j) x_i, with the k - 1 variables
/// ordered by increasing i.
class LinearForm {
 public:
  /// 1 <= omitted_index <= k.
  LinearForm(const Group& group, int omitted_index);

  int omitted_index() const noexcept { return omitted_index_; }
  const Group& group() const noexcept { return group_; }
  std::uint64_t modulus() const noexcept { return group_.modulus(); }
  std::size_t arity() const noexcept { return coefficients_.size(); }
  /// Residues (i - j) mod N in slot order.
  std::span<const Residue> coefficients() const noexcept {
    return coefficients_;
  }
  /// The original index i in [k] held by slot t.
  int slot_index(std::size_t slot) const noexcept;

  /// Throws ArityMismatch unless x has k - 1 entries.
  Residue operator()(std::span<const Residue> x) const;

 private:
  int omitted_index_;
  Group group_;
  std::vector<Residue> coefficients_;
};

Residue psi(const LinearForm& form, std::span<const Residue> x);

/// psi_1, ..., psi_k in order.
std::vector<LinearForm> all_forms(const Group& group);

/// Units s such that psi_from(s_1 x_1, ..., s_{k-1} x_{k-1}) = psi_to(x) for
/// every x, matching variables slot by slot.
std::vector<Residue> scaling_map(int from_j, int to_j, const Group& group);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace transference
