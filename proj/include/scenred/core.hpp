#ifndef SCENRED_CORE_HPP
#define SCENRED_CORE_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace scenred {

using Vector = std::vector<double>;
using IndexSet = std::vector<std::size_t>;

// Error hierarchy. Everything thrown by the library derives from Error so
// callers can catch at one point; the leaf types name the failure mode.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NegativeComponent : public Error {
 public:
  using Error::Error;
};

class NoRepresentation : public Error {
 public:
  using Error::Error;
};

class EnumerationCapExceeded : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class MissingLpDescription : public Error {
 public:
  using Error::Error;
};

class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Dense row-major matrix. Rows may be zero, in which case cols is still
/// meaningful (an m x 0 or 0 x n block of a polyhedral description).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// The discrete uncertainty set: N nonnegative cost vectors of dimension n.
/// Immutable once built; construct through validate_scenario_set or the
/// checked constructor.
class ScenarioSet {
 public:
  ScenarioSet() = default;
  /// Throws DimensionMismatch / NegativeComponent on malformed input.
  explicit ScenarioSet(const std::vector<Vector>& rows,
                       std::vector<std::string> labels = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  std::span<const double> operator[](std::size_t k) const {
    return {values_.data() + k * dim_, dim_};
  }
  Vector scenario(std::size_t k) const {
    auto s = (*this)[k];
    return {s.begin(), s.end()};
  }
  const std::vector<std::string>& labels() const { return labels_; }
  std::vector<Vector> rows() const;

  /// Scenarios at the given indices, in the given order.
  ScenarioSet subset(const IndexSet& indices) const;

  friend bool operator==(const ScenarioSet&, const ScenarioSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::vector<double> values_;
  std::vector<std::string> labels_;
};

struct SelectionSpec {
  std::size_t n = 0;
  std::size_t p = 0;
  friend bool operator==(const SelectionSpec&, const SelectionSpec&) = default;
};

struct LayeredGraphSpec {
  std::size_t layers = 0;  // L
  std::size_t width = 0;   // W
  friend bool operator==(const LayeredGraphSpec&, const LayeredGraphSpec&) = default;
};

/// Family tag carried alongside a polyhedral description. `std::monostate`
/// marks a caller-supplied description with no known combinatorial family.
using FamilySpec = std::variant<std::monostate, SelectionSpec, LayeredGraphSpec>;

class FeasibleSetDescription;

/// Exact listing of X, capped. Throws EnumerationCapExceeded past `cap`.
using Enumerator =
    std::function<std::vector<Vector>(const FeasibleSetDescription&, std::size_t cap)>;

/// X = { x >= 0 : exists y, A x + B y >= b }, optionally with bounds that
/// pin particular x coordinates (used for sub-instances of a family that
/// share one outer description).
class FeasibleSetDescription {
 public:
  FeasibleSetDescription() = default;
  FeasibleSetDescription(Matrix a, Matrix b_aux, Vector rhs, bool integral,
                         FamilySpec family = {}, Enumerator enumerator = {});

  std::size_t dim() const { return a_.cols(); }
  std::size_t aux_dim() const { return b_aux_.cols(); }
  std::size_t row_count() const { return a_.rows(); }

  const Matrix& a() const { return a_; }
  const Matrix& b_aux() const { return b_aux_; }
  const Vector& rhs() const { return rhs_; }

  /// True when the LP relaxation is exact for X (the polytope is integral).
  bool integral() const { return integral_; }
  const FamilySpec& family() const { return family_; }

  bool has_enumerator() const { return static_cast<bool>(enumerator_); }
  /// Every binary point of X. Uses the family enumerator when present and a
  /// brute-force scan of {0,1}^n otherwise (n <= 24).
  std::vector<Vector> enumerate(std::size_t cap) const;

  /// Whether x >= 0 satisfies A x + B y >= b for some y (y is only searched
  /// when aux_dim > 0, via an LP).
  bool contains(std::span<const double> x, double tol = 1e-9) const;

  /// Copy of this description with x_i fixed to `value` for each listed i,
  /// encoded as two extra rows. Family tag is dropped (the result is a
  /// sub-instance, not the family itself); the enumerator is filtered.
  FeasibleSetDescription with_fixed(const std::vector<std::pair<std::size_t, double>>& fixes) const;

 private:
  Matrix a_;
  Matrix b_aux_;
  Vector rhs_;
  bool integral_ = false;
  FamilySpec family_;
  Enumerator enumerator_;
};

/// A cone given by generators, by an LP form { x >= 0 : exists y, lambda >= 0,
/// A x + B y = lambda b } (stored as the >=-form description it came from),
/// or both.
struct ConeDescription {
  std::optional<std::vector<Vector>> generators;
  std::optional<FeasibleSetDescription> lp_form;

  static ConeDescription from_generators(std::vector<Vector> gens);
  static ConeDescription from_lp(FeasibleSetDescription description);
  static ConeDescription nonnegative_orthant(std::size_t n);

  std::size_t dim() const;
};

/// f(x, c). Defaults to the bilinear cost sum_i c_i x_i.
using ObjectiveFn = std::function<double(std::span<const double> x, std::span<const double> c)>;

double linear_objective(std::span<const double> x, std::span<const double> c);

struct RobustInstance {
  FeasibleSetDescription feasible;
  ScenarioSet uncertainty;
  ObjectiveFn objective = linear_objective;

  RobustInstance(FeasibleSetDescription x, ScenarioSet u, ObjectiveFn f = linear_objective);
};

ScenarioSet validate_scenario_set(const std::vector<Vector>& raw,
                                  std::vector<std::string> labels = {});

/// Indices of the scenarios kept by dedupe_scenarios (first member of each
/// group within max-norm distance `tol`), plus, for every input index, the
/// kept index it maps to.
struct DedupeMap {
  IndexSet kept;
  IndexSet representative;
};

DedupeMap dedupe_indices(const ScenarioSet& u, double tol);
ScenarioSet dedupe_scenarios(const ScenarioSet& u, double tol);

double dot(std::span<const double> a, std::span<const double> b);
double max_norm_distance(std::span<const double> a, std::span<const double> b);

}  // namespace scenred

#endif  // SCENRED_CORE_HPP
