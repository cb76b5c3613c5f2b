#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace orlicz {

class OrliczFunction;

struct Atom {
  long long id = 0;
  double weight = 0.0;
  bool operator==(const Atom&) const = default;
};

enum class SpaceKind { Finite, TruncatedCountable };

/// A discrete σ-finite measure space: atoms of strictly positive mass,
/// ordered by ascending id, partitioned into finite-mass blocks A₁,…,A_B.
/// Since every atom has positive mass, "a.e." means "at every atom".
class MeasureSpace {
public:
  /// `block_ids[i]` is the block of atom i; blocks are ordered by id.
  MeasureSpace(std::vector<Atom> atoms, std::vector<long long> block_ids,
               SpaceKind kind = SpaceKind::Finite, std::string tail_note = {});

  /// Atoms 0..n-1 with the given weights, one block per atom.
  static MeasureSpace finite(std::vector<double> weights);
  static MeasureSpace uniform_probability(std::size_t n);
  static MeasureSpace counting(std::size_t n);
  /// Atoms 1..n of a countable space, dyadic blocks {2^k, …, 2^{k+1}−1}.
  static MeasureSpace truncated_countable(std::size_t n, const std::function<double(long long)>& weight_of,
                                          std::string tail_note);

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const long long> block_ids() const noexcept { return block_ids_; }
  /// Atom indices of each block, blocks in ascending block id.
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  SpaceKind kind() const noexcept { return kind_; }
  const std::string& tail_note() const noexcept { return tail_note_; }

  double total_mass() const noexcept;
  bool is_probability(double tol = 1e-12) const noexcept;
  std::optional<std::size_t> index_of(long long id) const;

  bool operator==(const MeasureSpace& other) const;

private:
  std::vector<Atom> atoms_;
  std::vector<double> weights_;
  std::vector<long long> block_ids_;
  std::vector<std::vector<std::size_t>> blocks_;
  SpaceKind kind_;
  std::string tail_note_;
};

using SpacePtr = std::shared_ptr<const MeasureSpace>;

template <class... Args>
SpacePtr make_space(Args&&... args) {
  return std::make_shared<const MeasureSpace>(std::forward<Args>(args)...);
}
inline SpacePtr share(MeasureSpace space) { return std::make_shared<const MeasureSpace>(std::move(space)); }

/// A random variable: one finite real per atom, aligned with the atom order.
class Rv {
public:
  Rv(SpacePtr space, std::vector<double> values);

  static Rv zero(SpacePtr space);
  static Rv constant(SpacePtr space, double c);
  /// χ_A for a set of atom indices.
  static Rv indicator(SpacePtr space, std::span<const std::size_t> indices);

  const MeasureSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double max_abs() const noexcept;
  bool is_zero() const noexcept;

  Rv operator+(const Rv& other) const;
  Rv operator-(const Rv& other) const;
  Rv operator*(double c) const;
  Rv operator-() const { return *this * -1.0; }
  bool operator==(const Rv& other) const;

private:
  SpacePtr space_;
  std::vector<double> values_;
};

inline Rv operator*(double c, const Rv& x) { return x * c; }

/// Throws StructureError unless both variables live on the same space.
void require_same_space(const Rv& x, const Rv& y);

struct LatticeParts {
  Rv meet;
  Rv join;
  Rv abs;
  Rv pos_part;
  Rv neg_part;
};

/// x ∧ y, x ∨ y, |x|, x⁺, x⁻ (componentwise; |·| and parts refer to x).
LatticeParts lattice_ops(const Rv& x, const Rv& y);
Rv meet(const Rv& x, const Rv& y);
Rv join(const Rv& x, const Rv& y);
Rv abs(const Rv& x);
Rv pos_part(const Rv& x);
Rv neg_part(const Rv& x);

/// Σ_n δ_n χ_{A_n} with δ_n = 2⁻ⁿ / (1 + ‖χ_{A_n}‖_Φ), strictly positive at
/// every atom, Luxemburg norm at most 1.
Rv strictly_positive_witness(const SpacePtr& space, const OrliczFunction& phi);

struct AeReport {
  bool converges = false;
  /// Index of the atom that settles last (or does not settle).
  std::size_t slowest_atom = 0;
  long long slowest_atom_id = 0;
  /// Per atom: first term index after which every residual is ≤ tol
  /// (equal to the sequence length when the atom never settles).
  std::vector<std::size_t> settle_index;
  /// Per atom: |f_n − f| at the final recorded term.
  std::vector<double> final_residual;
  /// Per term: max over atoms of |f_n − f|.
  std::vector<double> residual_profile;
};

/// Pointwise (= a.e.) convergence on the recorded sequence: every atom's
/// residual |f_n(ω) − f(ω)| is ≤ tol from some term on, including the last.
AeReport ae_converges(std::span<const Rv> seq, const Rv& f, double tol);

/// CSV with header `atom_id,weight,block_id`; rows sorted by atom id on load.
MeasureSpace load_space_csv(const std::string& path);
void save_space_csv(const MeasureSpace& space, const std::string& path);
/// CSV with header `atom_id,value`; every atom of the space must appear once.
Rv load_rv_csv(const SpacePtr& space, const std::string& path);
void save_rv_csv(const Rv& rv, const std::string& path);

}  // namespace orlicz
