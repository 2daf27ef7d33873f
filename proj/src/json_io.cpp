#include "scenred/json_io.hpp"

#include <cmath>
#include <fstream>

#include "scenred/problems.hpp"

namespace scenred {

namespace {

// JSON has no NaN or infinity: NaN becomes null, infinities strings.
Json real(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from(const Json& j) {
  if (j.is_null()) return std::nan("");
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    throw IoError("expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(Json(std::vector<double>(m.row(r).begin(), m.row(r).end())));
  }
  return rows;
}

Matrix matrix_from(const Json& j, std::size_t cols_if_empty) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? cols_if_empty : j.at(0).size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols) throw IoError("ragged matrix in JSON input");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

Json to_json(const ScenarioSet& u) {
  Json j;
  j["dim"] = u.dim();
  j["scenarios"] = u.rows();
  if (!u.labels().empty()) j["labels"] = u.labels();
  return j;
}

ScenarioSet scenario_set_from_json(const Json& j) {
  return guarded([&] {
    const auto& s = j.contains("scenarios") ? j.at("scenarios") : j;
    auto rows = s.get<std::vector<Vector>>();
    if (j.is_object() && j.contains("dim") && !rows.empty() && rows.front().size() != j.at("dim").get<std::size_t>()) {
      throw DimensionMismatch("scenario length differs from \"dim\"");
    }
    std::vector<std::string> labels;
    if (j.is_object() && j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return ScenarioSet(rows, std::move(labels));
  });
}

Json to_json(const FamilySpec& f) {
  if (const auto* s = std::get_if<SelectionSpec>(&f)) return {{"family", "selection"}, {"n", s->n}, {"p", s->p}};
  if (const auto* l = std::get_if<LayeredGraphSpec>(&f)) {
    return {{"family", "layered_sp"}, {"L", l->layers}, {"W", l->width}};
  }
  return {{"family", "custom"}};
}

FamilySpec family_from_json(const Json& j) {
  return guarded([&]() -> FamilySpec {
    const auto type = (j.contains("family") ? j.at("family") : j.at("type")).get<std::string>();
    if (type == "selection") return SelectionSpec{j.at("n").get<std::size_t>(), j.at("p").get<std::size_t>()};
    if (type == "layered_sp" || type == "layered") return LayeredGraphSpec{j.at("L").get<std::size_t>(), j.at("W").get<std::size_t>()};
    if (type == "custom") return std::monostate{};
    throw IoError("unknown family type '" + type + "'");
  });
}

Json to_json(const FeasibleSetDescription& x) {
  if (!std::holds_alternative<std::monostate>(x.family())) return to_json(x.family());
  Json j = {{"family", "custom"}, {"dim", x.dim()}, {"integral", x.integral()}};
  j["A"] = matrix_json(x.a());
  j["B"] = matrix_json(x.b_aux());
  j["aux_dim"] = x.aux_dim();
  j["b"] = x.rhs();
  return j;
}

FeasibleSetDescription description_from_json(const Json& j) {
  return guarded([&] {
    const auto family = family_from_json(j);
    if (!std::holds_alternative<std::monostate>(family)) return family_description(family);
    Matrix a = matrix_from(j.at("A"), j.value("dim", std::size_t{0}));
    Matrix b = j.contains("B") ? matrix_from(j.at("B"), j.value("aux_dim", std::size_t{0})) : Matrix(a.rows(), 0);
    if (b.rows() == 0 && a.rows() > 0) b = Matrix(a.rows(), 0);
    return FeasibleSetDescription(std::move(a), std::move(b), j.at("b").get<Vector>(), j.value("integral", false));
  });
}

Json to_json(const ReductionResult& r) {
  Json j;
  j["method"] = to_string(r.method);
  j["original_size"] = r.original_size;
  j["selected"] = r.selected;
  j["fraction"] = r.fraction();
  j["status"] = to_string(r.status);
  j["wall_seconds"] = r.wall_seconds;
  j["flags"] = r.flags;
  Json as = Json::array();
  for (const auto& a : r.assignment) {
    Json e = {{"sources", a.sources}};
    if (!a.weights.empty()) e["weights"] = a.weights;
    if (!a.per_solution.empty()) e["per_solution"] = a.per_solution;
    as.push_back(std::move(e));
  }
  j["assignment"] = std::move(as);
  if (!r.dual_certificates.empty()) j["dual_certificates"] = r.dual_certificates;
  return j;
}

Json to_json(const ApproximationResult& r) {
  Json j;
  j["method"] = to_string(r.method);
  j["representatives"] = r.representatives.rows();
  j["hull_weights"] = matrix_json(r.hull_weights);
  j["t"] = real(r.t);
  j["beta"] = real(r.beta);
  if (r.assignment.rows() > 0) j["assignment"] = matrix_json(r.assignment);
  if (!r.candidate_solutions.empty()) {
    j["candidate_solutions"] = r.candidate_solutions;
    j["solution_assignment"] = r.solution_assignment;
  }
  if (!r.cluster_of.empty()) j["cluster_of"] = r.cluster_of;
  Json trace = Json::array();
  for (const auto& t : r.trace) trace.push_back({{"t", real(t.t)}, {"improvement", real(t.improvement)}});
  j["trace"] = std::move(trace);
  j["status"] = to_string(r.status);
  j["iteration_limit"] = r.iteration_limit;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

Json to_json(const ReductionRecord& r) {
  return {{"family", r.family},     {"dim", r.dim},         {"instance", r.instance},
          {"method", r.method},     {"variant", r.variant}, {"original", r.original},
          {"selected", r.selected}, {"fraction", r.fraction}, {"status", r.status},
          {"oracle", r.oracle},     {"error", r.error},     {"seconds", r.seconds}};
}

Json to_json(const ApproximationRecord& r) {
  return {{"family", r.family},
          {"dim", r.dim},
          {"instance", r.instance},
          {"method", r.method},
          {"pair", r.pair},
          {"beta", real(r.beta)},
          {"guarantee_t3", real(r.guarantee_t3)},
          {"guarantee_t4", real(r.guarantee_t4)},
          {"ub_ratio", real(r.ub_ratio)},
          {"status", r.status},
          {"error", r.error},
          {"aggregation_seconds", r.aggregation_seconds},
          {"solution_seconds", r.solution_seconds},
          {"process_seconds", r.process_seconds}};
}

ReductionRecord reduction_record_from_json(const Json& j) {
  return guarded([&] {
    ReductionRecord r;
    r.family = j.at("family").get<std::string>();
    r.dim = j.at("dim").get<std::size_t>();
    r.instance = j.at("instance").get<std::size_t>();
    r.method = j.at("method").get<std::string>();
    r.variant = j.value("variant", std::string("exact"));
    r.original = j.at("original").get<std::size_t>();
    r.selected = j.at("selected").get<std::size_t>();
    r.fraction = j.at("fraction").get<double>();
    r.status = j.value("status", std::string("ok"));
    r.oracle = j.value("oracle", std::string("skipped"));
    r.error = j.value("error", std::string());
    r.seconds = j.value("seconds", 0.0);
    return r;
  });
}

ApproximationRecord approximation_record_from_json(const Json& j) {
  return guarded([&] {
    ApproximationRecord r;
    r.family = j.at("family").get<std::string>();
    r.dim = j.at("dim").get<std::size_t>();
    r.instance = j.at("instance").get<std::size_t>();
    r.method = j.at("method").get<std::string>();
    r.pair = j.value("pair", std::string());
    r.beta = real_from(j.at("beta"));
    r.guarantee_t3 = real_from(j.at("guarantee_t3"));
    r.guarantee_t4 = real_from(j.at("guarantee_t4"));
    r.ub_ratio = real_from(j.at("ub_ratio"));
    r.status = j.value("status", std::string("ok"));
    r.error = j.value("error", std::string());
    r.aggregation_seconds = j.value("aggregation_seconds", 0.0);
    r.solution_seconds = j.value("solution_seconds", 0.0);
    r.process_seconds = j.value("process_seconds", 0.0);
    return r;
  });
}

Json read_json_file(const std::filesystem::path& p) {
  std::ifstream f(p);
  if (!f) throw IoError("cannot open " + p.string());
  try {
    return Json::parse(f);
  } catch (const Json::exception& e) {
    throw IoError(p.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& p, const Json& j) {
  std::ofstream f(p);
  if (!f) throw IoError("cannot open " + p.string() + " for writing");
  f << j.dump(2) << "\n";
  if (!f) throw IoError("failed writing " + p.string());
}

}  // namespace scenred
