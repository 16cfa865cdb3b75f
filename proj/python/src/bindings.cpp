#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "reoptbench/error.hpp"
#include "reoptbench/harness.hpp"
#include "reoptbench/manifest.hpp"
#include "reoptbench/model.hpp"
#include "reoptbench/mps.hpp"
#include "reoptbench/oracle.hpp"
#include "reoptbench/reopt.hpp"
#include "reoptbench/score.hpp"
#include "reoptbench/simgen.hpp"
#include "reoptbench/solution_file.hpp"

namespace py = pybind11;
namespace rb = reoptbench;

namespace {

void bind_model(py::module_& m) {
  py::enum_<rb::Sense>(m, "Sense")
      .value("minimize", rb::Sense::minimize)
      .value("maximize", rb::Sense::maximize);
  py::enum_<rb::VarKind>(m, "VarKind")
      .value("continuous", rb::VarKind::continuous)
      .value("binary", rb::VarKind::binary)
      .value("general_integer", rb::VarKind::general_integer);

  py::class_<rb::Variable>(m, "Variable")
      .def(py::init<>())
      .def(py::init([](std::string name, rb::VarKind kind, double lower, double upper,
                       double objective) {
             return rb::Variable{std::move(name), kind, lower, upper, objective};
           }),
           py::arg("name"), py::arg("kind") = rb::VarKind::continuous, py::arg("lower") = 0.0,
           py::arg("upper") = rb::kInfinity, py::arg("objective") = 0.0)
      .def_readwrite("name", &rb::Variable::name)
      .def_readwrite("kind", &rb::Variable::kind)
      .def_readwrite("lower", &rb::Variable::lower)
      .def_readwrite("upper", &rb::Variable::upper)
      .def_readwrite("objective", &rb::Variable::objective)
      .def("__eq__", [](const rb::Variable& a, const rb::Variable& b) { return a == b; });

  py::class_<rb::Row>(m, "Row")
      .def(py::init<>())
      .def(py::init([](std::string name, const std::vector<std::pair<std::size_t, double>>& coefs,
                       double lhs, double rhs) {
             rb::Row r{std::move(name), {}, lhs, rhs};
             for (const auto& [j, v] : coefs) r.coefficients.push_back({j, v});
             return r;
           }),
           py::arg("name"), py::arg("coefficients"), py::arg("lhs") = -rb::kInfinity,
           py::arg("rhs") = rb::kInfinity)
      .def_readwrite("name", &rb::Row::name)
      .def_property(
          "coefficients",
          [](const rb::Row& r) {
            std::vector<std::pair<std::size_t, double>> out;
            for (const rb::Entry& e : r.coefficients) out.emplace_back(e.index, e.value);
            return out;
          },
          [](rb::Row& r, const std::vector<std::pair<std::size_t, double>>& coefs) {
            r.coefficients.clear();
            for (const auto& [j, v] : coefs) r.coefficients.push_back({j, v});
          })
      .def_readwrite("lhs", &rb::Row::lhs)
      .def_readwrite("rhs", &rb::Row::rhs);

  py::class_<rb::Instance>(m, "Instance")
      .def(py::init<>())
      .def_readwrite("name", &rb::Instance::name)
      .def_readwrite("sense", &rb::Instance::sense)
      .def_readwrite("objective_constant", &rb::Instance::objective_constant)
      .def_readwrite("variables", &rb::Instance::variables)
      .def_readwrite("rows", &rb::Instance::rows)
      .def_property_readonly("num_variables", &rb::Instance::num_variables)
      .def_property_readonly("num_rows", &rb::Instance::num_rows)
      .def("objective", &rb::Instance::objective)
      .def("__eq__", [](const rb::Instance& a, const rb::Instance& b) { return a == b; });

  py::class_<rb::FeasReport>(m, "FeasReport")
      .def_readonly("feasible", &rb::FeasReport::feasible)
      .def_readonly("max_bound_violation", &rb::FeasReport::max_bound_violation)
      .def_readonly("max_row_violation", &rb::FeasReport::max_row_violation)
      .def_readonly("max_integrality_violation", &rb::FeasReport::max_integrality_violation)
      .def_readonly("worst_offender", &rb::FeasReport::worst_offender);

  m.def("validate", [](const rb::Instance& in) { rb::validate(in); });
  m.def("bit_equal", &rb::bit_equal);
  m.def("objective_value", [](const rb::Instance& in, const std::vector<double>& x) {
    return rb::objective_value(in, x);
  });
  m.def("check_feasibility", [](const rb::Instance& in, const std::vector<double>& x) {
    return rb::check_feasibility(in, x);
  });
  m.def("changed_components", [](const rb::Instance& base, const rb::Instance& other) {
    const rb::StructuralDiff d = rb::structural_diff(base, other);
    if (!d.same_structure) throw rb::StructuralError(d.mismatch);
    return d.changed.names();
  });
}

void bind_mps(py::module_& m) {
  auto dialect = [](const std::string& name) {
    if (name == "free") return rb::MpsDialect::free_format();
    if (name == "fixed") return rb::MpsDialect::fixed_format();
    throw rb::InvalidInputError("unknown MPS dialect '" + name + "'");
  };
  m.def("parse_mps",
        [dialect](const std::string& text, const std::string& d) {
          return rb::parse_mps(text, dialect(d));
        },
        py::arg("text"), py::arg("dialect") = "free");
  m.def("write_mps",
        [dialect](const rb::Instance& in, const std::string& d) {
          return rb::write_mps(in, dialect(d));
        },
        py::arg("instance"), py::arg("dialect") = "free");
  m.def("read_mps_file", [](const std::filesystem::path& p) { return rb::read_mps_file(p); });
  m.def("write_mps_file",
        [](const std::filesystem::path& p, const rb::Instance& in) { rb::write_mps_file(p, in); });
  m.def("read_solution_file", [](const std::filesystem::path& p, const rb::Instance& in) {
    return rb::read_solution_file(p, in).values;
  });
}

void bind_score(py::module_& m) {
  py::enum_<rb::SolveStatus>(m, "SolveStatus")
      .value("optimal", rb::SolveStatus::optimal)
      .value("timeout_incumbent", rb::SolveStatus::timeout_incumbent)
      .value("timeout_nofeas", rb::SolveStatus::timeout_nofeas)
      .value("error", rb::SolveStatus::error);

  py::class_<rb::SolveOutcome>(m, "SolveOutcome")
      .def(py::init([](double time_spent, double time_limit, bool solved,
                       std::optional<double> pb, std::optional<double> db, bool feasible,
                       bool stopped_early) {
             return rb::SolveOutcome{time_spent, time_limit, solved, pb, db, feasible,
                                     stopped_early};
           }),
           py::arg("time_spent_seconds"), py::arg("time_limit_seconds"),
           py::arg("solved_to_optimality") = false, py::arg("primal_bound") = py::none(),
           py::arg("dual_bound") = py::none(), py::arg("has_feasible_solution") = false,
           py::arg("stopped_early_without_zero_gap") = false)
      .def_readwrite("time_spent_seconds", &rb::SolveOutcome::time_spent_seconds)
      .def_readwrite("time_limit_seconds", &rb::SolveOutcome::time_limit_seconds)
      .def_readwrite("solved_to_optimality", &rb::SolveOutcome::solved_to_optimality)
      .def_readwrite("primal_bound", &rb::SolveOutcome::primal_bound)
      .def_readwrite("dual_bound", &rb::SolveOutcome::dual_bound)
      .def_readwrite("has_feasible_solution", &rb::SolveOutcome::has_feasible_solution)
      .def_readwrite("stopped_early_without_zero_gap",
                     &rb::SolveOutcome::stopped_early_without_zero_gap);

  py::class_<rb::ScoreRecord>(m, "ScoreRecord")
      .def_readonly("series", &rb::ScoreRecord::series)
      .def_readonly("instance", &rb::ScoreRecord::instance)
      .def_readonly("reltime", &rb::ScoreRecord::reltime)
      .def_readonly("gap", &rb::ScoreRecord::gap)
      .def_readonly("nofeas", &rb::ScoreRecord::nofeas)
      .def_readonly("f", &rb::ScoreRecord::f);

  m.def("reltime", &rb::reltime);
  m.def("gap", &rb::gap, py::arg("primal_bound"), py::arg("dual_bound"));
  m.def("instance_score", &rb::instance_score, py::arg("outcome"), py::arg("series") = 1,
        py::arg("instance") = 1);
  m.def("rank_instance",
        [](const std::vector<double>& scores, const std::vector<bool>& valid) {
          return rb::rank_instance(scores, valid);
        });
  m.def("instance_weight", &rb::instance_weight);
  m.def(
      "final_scores",
      [](const std::map<std::string, std::vector<double>>& f_by_team,
         const std::map<std::string, std::vector<bool>>& valid_by_team) {
        std::vector<rb::TeamSeriesScores> all;
        for (const auto& [team, fs] : f_by_team) {
          rb::TeamSeriesScores t{team, 1, {}, {}};
          const auto v = valid_by_team.find(team);
          for (std::size_t i = 0; i < fs.size(); ++i) {
            t.records.push_back({1, static_cast<int>(i + 1), 0, 0, 0, fs[i]});
            t.valid.push_back(v == valid_by_team.end() ? true : v->second.at(i));
          }
          all.push_back(std::move(t));
        }
        const int n = all.empty() ? 0 : static_cast<int>(all.front().records.size());
        const rb::FinalScore fs = rb::final_score(rb::build_rank_table(all, n));
        std::map<std::string, double> out;
        for (std::size_t k = 0; k < fs.teams.size(); ++k) out[fs.teams[k]] = fs.C[k];
        return out;
      },
      py::arg("f_by_team"), py::arg("valid_by_team") = std::map<std::string, std::vector<bool>>{},
      "C per team for one series; f_by_team maps a team to its f values in instance order.");
}

void bind_generation(py::module_& m) {
  m.def("similarity", [](const std::vector<double>& a, const std::vector<double>& b) {
    return rb::similarity(a, b);
  });
  m.def(
      "generate_series",
      [](const std::string& recipe, std::uint64_t seed, std::optional<rb::Instance> base,
         std::optional<double> time_limit, const std::map<std::string, double>& parameters,
         const std::string& series_name) {
        rb::SeriesRequest req;
        req.spec.recipe = rb::recipe_from_string(recipe);
        req.spec.seed = seed;
        if (base) req.base = rb::promote_unit_integers(*base);
        req.time_limit_seconds = time_limit;
        req.series_name = series_name;
        rb::RecipeParameters& p = req.spec.parameters;
        for (const auto& [key, value] : parameters) {
          if (key == "max_relative_change") p.max_relative_change = value;
          else if (key == "fraction_low") p.fraction_low = value;
          else if (key == "fraction_high") p.fraction_high = value;
          else if (key == "relative_noise") p.relative_noise = value;
          else if (key == "rotation_pairs") p.rotation_pairs = static_cast<std::uint64_t>(value);
          else if (key == "max_angle_radians") p.max_angle_radians = value;
          else if (key == "side_relative_change") p.side_relative_change = value;
          else if (key == "rhs_spread") p.rhs_spread = value;
          else if (key == "synthetic_variables") p.synthetic_variables = static_cast<std::uint64_t>(value);
          else if (key == "synthetic_rows") p.synthetic_rows = static_cast<std::uint64_t>(value);
          else throw rb::InvalidInputError("unknown generator parameter '" + key + "'");
        }
        const rb::GeneratedSeries s = rb::generate_series(req);
        return py::make_tuple(s.base, s.instances, s.manifest.variation_mask.names(),
                              s.manifest.time_limit_seconds);
      },
      py::arg("recipe") = "synthetic_semicontinuous", py::arg("seed") = 0,
      py::arg("base") = py::none(), py::arg("time_limit") = py::none(),
      py::arg("parameters") = std::map<std::string, double>{}, py::arg("series_name") = "series",
      "Returns (base, instances, variation mask names, time limit).");
  m.def(
      "write_series",
      [](const std::string& recipe, std::uint64_t seed, const std::filesystem::path& directory,
         std::optional<double> time_limit) {
        rb::SeriesRequest req;
        req.spec.recipe = rb::recipe_from_string(recipe);
        req.spec.seed = seed;
        req.time_limit_seconds = time_limit;
        rb::write_series(rb::generate_series(req), directory);
        return directory / "manifest.json";
      },
      py::arg("recipe"), py::arg("seed"), py::arg("directory"), py::arg("time_limit") = py::none(),
      "Generates a series without a base (synthetic recipe) and writes it; returns the manifest path.");
}

void bind_solving(py::module_& m) {
  py::class_<rb::OracleResult>(m, "OracleResult")
      .def_readonly("status", &rb::OracleResult::status)
      .def_readonly("outcome", &rb::OracleResult::outcome)
      .def_property_readonly("solution",
                             [](const rb::OracleResult& r) -> std::optional<std::vector<double>> {
                               if (!r.solution) return std::nullopt;
                               return r.solution->values;
                             })
      .def_readonly("assignments_visited", &rb::OracleResult::assignments_visited);
  m.def("enumerate_solve",
        [](const rb::Instance& in, double time_limit) { return rb::enumerate_solve(in, time_limit); },
        py::arg("instance"), py::arg("time_limit") = 60.0);

  py::class_<rb::InstanceResult>(m, "InstanceResult")
      .def_readonly("index", &rb::InstanceResult::index)
      .def_readonly("status", &rb::InstanceResult::status)
      .def_readonly("outcome", &rb::InstanceResult::outcome)
      .def_readonly("valid", &rb::InstanceResult::valid)
      .def_readonly("note", &rb::InstanceResult::note);
  py::class_<rb::SeriesRunRecord>(m, "SeriesRunRecord")
      .def_readonly("series_name", &rb::SeriesRunRecord::series_name)
      .def_readonly("results", &rb::SeriesRunRecord::results)
      .def_readonly("protocol_violations", &rb::SeriesRunRecord::protocol_violations)
      .def_readonly("rejected", &rb::SeriesRunRecord::rejected)
      .def_readonly("exit_code", &rb::SeriesRunRecord::exit_code)
      .def_property_readonly("event_count",
                             [](const rb::SeriesRunRecord& r) { return r.events.size(); });

  m.def(
      "run_series",
      [](const std::vector<std::string>& command, const std::filesystem::path& manifest,
         std::optional<double> time_limit, std::optional<double> budget) {
        rb::RunLimits limits = rb::RunLimits::for_manifest(rb::load_manifest(manifest));
        if (time_limit) {
          limits.total_budget_seconds *= *time_limit / limits.per_instance_time_limit_seconds;
          limits.per_instance_time_limit_seconds = *time_limit;
        }
        if (budget) limits.total_budget_seconds = *budget;
        py::gil_scoped_release release;
        return rb::run_series(command, manifest, limits);
      },
      py::arg("command"), py::arg("manifest"), py::arg("time_limit") = py::none(),
      py::arg("budget") = py::none());
  m.def("persist_run", [](const rb::SeriesRunRecord& r, const std::filesystem::path& p) {
    rb::persist_run(r, p);
  });
  m.def("load_run", [](const std::filesystem::path& p) { return rb::load_run(p); });
  m.def("score_run", [](const rb::SeriesRunRecord& r) {
    const rb::RunScores s = rb::score_run(r);
    return py::make_tuple(s.records, s.valid);
  });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Series generation, scoring and solver supervision for related MILP instances";

  py::register_exception<rb::Error>(m, "Error", PyExc_RuntimeError);
  bind_model(m);
  bind_mps(m);
  bind_score(m);
  bind_generation(m);
  bind_solving(m);
  m.attr("inf") = rb::kInfinity;
}
