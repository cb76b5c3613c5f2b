#include "orlicz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "orlicz/error.hpp"
#include "csv.hpp"
#include "text_util.hpp"

namespace orlicz {

MeasureSpace::MeasureSpace(std::vector<Atom> atoms, std::vector<long long> block_ids, SpaceKind kind,
                           std::string tail_note)
    : atoms_(std::move(atoms)), block_ids_(std::move(block_ids)), kind_(kind), tail_note_(std::move(tail_note)) {
  if (atoms_.empty()) throw StructureError("measure space needs at least one atom");
  if (block_ids_.size() != atoms_.size()) throw StructureError("every atom needs a block id");
  weights_.reserve(atoms_.size());
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const double w = atoms_[i].weight;
    if (!(w > 0.0) || !std::isfinite(w))
      throw StructureError("atom " + std::to_string(atoms_[i].id) + " has non-positive or infinite weight");
    if (i > 0 && !(atoms_[i].id > atoms_[i - 1].id)) throw StructureError("atom ids must be strictly ascending");
    weights_.push_back(w);
  }
  std::map<long long, std::vector<size_t>> grouped;
  for (size_t i = 0; i < atoms_.size(); ++i) grouped[block_ids_[i]].push_back(i);
  for (auto& [id, members] : grouped) blocks_.push_back(std::move(members));
}

MeasureSpace MeasureSpace::finite(std::vector<double> weights) {
  std::vector<Atom> atoms;
  std::vector<long long> blocks;
  for (size_t i = 0; i < weights.size(); ++i) {
    atoms.push_back({static_cast<long long>(i), weights[i]});
    blocks.push_back(static_cast<long long>(i));
  }
  return MeasureSpace(std::move(atoms), std::move(blocks));
}

MeasureSpace MeasureSpace::uniform_probability(size_t n) {
  return finite(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

MeasureSpace MeasureSpace::counting(size_t n) { return finite(std::vector<double>(n, 1.0)); }

MeasureSpace MeasureSpace::truncated_countable(size_t n, const std::function<double(long long)>& weight_of,
                                               std::string tail_note) {
  std::vector<Atom> atoms;
  std::vector<long long> blocks;
  for (size_t i = 1; i <= n; ++i) {
    const auto id = static_cast<long long>(i);
    atoms.push_back({id, weight_of(id)});
    long long k = 0;
    while ((2LL << k) <= id) ++k;  // id ∈ [2^k, 2^{k+1})
    blocks.push_back(k);
  }
  return MeasureSpace(std::move(atoms), std::move(blocks), SpaceKind::TruncatedCountable, std::move(tail_note));
}

double MeasureSpace::total_mass() const noexcept { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

bool MeasureSpace::is_probability(double tol) const noexcept {
  return std::abs(total_mass() - 1.0) <= tol * static_cast<double>(std::max<size_t>(1, size()));
}

std::optional<size_t> MeasureSpace::index_of(long long id) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), id, [](const Atom& a, long long v) { return a.id < v; });
  if (it == atoms_.end() || it->id != id) return std::nullopt;
  return static_cast<size_t>(it - atoms_.begin());
}

bool MeasureSpace::operator==(const MeasureSpace& other) const {
  return atoms_ == other.atoms_ && block_ids_ == other.block_ids_ && kind_ == other.kind_;
}

Rv::Rv(SpacePtr space, std::vector<double> values) : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw StructureError("random variable needs a measure space");
  if (values_.size() != space_->size())
    throw StructureError("random variable has " + std::to_string(values_.size()) + " values for " +
                         std::to_string(space_->size()) + " atoms");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("random variable values must be finite");
}

Rv Rv::zero(SpacePtr space) {
  const size_t n = space->size();
  return Rv(std::move(space), std::vector<double>(n, 0.0));
}

Rv Rv::constant(SpacePtr space, double c) {
  const size_t n = space->size();
  return Rv(std::move(space), std::vector<double>(n, c));
}

Rv Rv::indicator(SpacePtr space, std::span<const size_t> indices) {
  std::vector<double> v(space->size(), 0.0);
  for (size_t i : indices) {
    if (i >= v.size()) throw StructureError("indicator index out of range");
    v[i] = 1.0;
  }
  return Rv(std::move(space), std::move(v));
}

double Rv::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Rv::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

void require_same_space(const Rv& x, const Rv& y) {
  if (x.space_ptr() == y.space_ptr()) return;
  if (!(x.space() == y.space())) throw StructureError("random variables live on different measure spaces");
}

namespace {

template <class Op>
Rv zip(const Rv& x, const Rv& y, Op op) {
  require_same_space(x, y);
  std::vector<double> out(x.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = op(x[i], y[i]);
  return Rv(x.space_ptr(), std::move(out));
}

template <class Op>
Rv map(const Rv& x, Op op) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = op(x[i]);
  return Rv(x.space_ptr(), std::move(out));
}

}  // namespace

Rv Rv::operator+(const Rv& other) const { return zip(*this, other, [](double a, double b) { return a + b; }); }
Rv Rv::operator-(const Rv& other) const { return zip(*this, other, [](double a, double b) { return a - b; }); }
Rv Rv::operator*(double c) const { return map(*this, [c](double a) { return c * a; }); }

bool Rv::operator==(const Rv& other) const {
  if (space_ptr() != other.space_ptr() && !(space() == other.space())) return false;
  return values_ == other.values_;
}

Rv meet(const Rv& x, const Rv& y) { return zip(x, y, [](double a, double b) { return std::min(a, b); }); }
Rv join(const Rv& x, const Rv& y) { return zip(x, y, [](double a, double b) { return std::max(a, b); }); }
Rv abs(const Rv& x) { return map(x, [](double a) { return std::abs(a); }); }
Rv pos_part(const Rv& x) { return map(x, [](double a) { return a > 0.0 ? a : 0.0; }); }
Rv neg_part(const Rv& x) { return map(x, [](double a) { return a < 0.0 ? -a : 0.0; }); }

LatticeParts lattice_ops(const Rv& x, const Rv& y) {
  return {meet(x, y), join(x, y), abs(x), pos_part(x), neg_part(x)};
}

AeReport ae_converges(std::span<const Rv> seq, const Rv& f, double tol) {
  if (seq.empty()) throw StructureError("a.e. convergence needs a non-empty sequence");
  for (const auto& term : seq) require_same_space(term, f);
  const size_t n_atoms = f.size();
  const size_t len = seq.size();
  AeReport r;
  r.settle_index.assign(n_atoms, 0);
  r.final_residual.assign(n_atoms, 0.0);
  r.residual_profile.assign(len, 0.0);
  for (size_t k = 0; k < len; ++k) {
    const auto vals = seq[k].values();
    for (size_t i = 0; i < n_atoms; ++i) {
      const double res = std::abs(vals[i] - f[i]);
      r.residual_profile[k] = std::max(r.residual_profile[k], res);
      if (res > tol) r.settle_index[i] = k + 1;
    }
  }
  r.converges = true;
  size_t worst = 0;
  for (size_t i = 0; i < n_atoms; ++i) {
    r.final_residual[i] = std::abs(seq[len - 1][i] - f[i]);
    if (r.settle_index[i] >= len) r.converges = false;
    if (r.settle_index[i] > r.settle_index[worst]) worst = i;
  }
  r.slowest_atom = worst;
  r.slowest_atom_id = f.space().atoms()[worst].id;
  return r;
}

namespace detail {

std::vector<std::vector<std::string>> read_csv(const std::string& path, const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto cols = detail::split(trimmed, ',');
    if (!header_seen) {
      std::vector<std::string> got(cols.begin(), cols.end());
      if (got != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw ParseError(path + ": expected header '" + want + "'");
      }
      header_seen = true;
      continue;
    }
    if (cols.size() != header.size())
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) + " columns");
    rows.emplace_back(cols.begin(), cols.end());
  }
  if (!header_seen) throw ParseError(path + ": empty file");
  return rows;
}

long long parse_id(const std::string& s, const std::string& path) {
  long long v = 0;
  if (!detail::try_parse_int(s, v)) throw ParseError(path + ": cannot parse integer '" + s + "'");
  return v;
}

}  // namespace detail

using detail::parse_id;
using detail::read_csv;

MeasureSpace load_space_csv(const std::string& path) {
  const auto rows = read_csv(path, {"atom_id", "weight", "block_id"});
  struct Row {
    long long id;
    double weight;
    long long block;
  };
  std::vector<Row> parsed;
  for (const auto& r : rows) {
    Row row{parse_id(r[0], path), detail::parse_double(r[1], "weight"), parse_id(r[2], path)};
    if (!(row.weight > 0.0) || !std::isfinite(row.weight))
      throw ParseError(path + ": atom " + r[0] + " needs a positive finite weight");
    parsed.push_back(row);
  }
  if (parsed.empty()) throw ParseError(path + ": no atoms");
  std::sort(parsed.begin(), parsed.end(), [](const Row& a, const Row& b) { return a.id < b.id; });
  std::vector<Atom> atoms;
  std::vector<long long> blocks;
  for (size_t i = 0; i < parsed.size(); ++i) {
    if (i > 0 && parsed[i].id == parsed[i - 1].id)
      throw ParseError(path + ": duplicate atom id " + std::to_string(parsed[i].id));
    atoms.push_back({parsed[i].id, parsed[i].weight});
    blocks.push_back(parsed[i].block);
  }
  return MeasureSpace(std::move(atoms), std::move(blocks));
}

void save_space_csv(const MeasureSpace& space, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "atom_id,weight,block_id\n";
  for (size_t i = 0; i < space.size(); ++i)
    out << space.atoms()[i].id << ',' << detail::format_double(space.atoms()[i].weight) << ','
        << space.block_ids()[i] << '\n';
}

Rv load_rv_csv(const SpacePtr& space, const std::string& path) {
  const auto rows = read_csv(path, {"atom_id", "value"});
  std::vector<double> values(space->size(), 0.0);
  std::vector<bool> seen(space->size(), false);
  for (const auto& r : rows) {
    const long long id = parse_id(r[0], path);
    const auto idx = space->index_of(id);
    if (!idx) throw ParseError(path + ": unknown atom id " + r[0]);
    if (seen[*idx]) throw ParseError(path + ": duplicate atom id " + r[0]);
    const double v = detail::parse_double(r[1], "value");
    if (!std::isfinite(v)) throw ParseError(path + ": value for atom " + r[0] + " must be finite");
    values[*idx] = v;
    seen[*idx] = true;
  }
  for (size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ParseError(path + ": missing value for atom " + std::to_string(space->atoms()[i].id));
  return Rv(space, std::move(values));
}

void save_rv_csv(const Rv& rv, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "atom_id,value\n";
  for (size_t i = 0; i < rv.size(); ++i)
    out << rv.space().atoms()[i].id << ',' << detail::format_double(rv[i]) << '\n';
}

}  // namespace orlicz
