// Thin pybind11 layer. Structured inputs and outputs cross the boundary as
// JSON text in the same schema the CLI reads and writes; the Python package
// converts to and from dicts.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wegner2p/cli.hpp"
#include "wegner2p/errors.hpp"
#include "wegner2p/experiments.hpp"
#include "wegner2p/report.hpp"
#include "wegner2p/spectral.hpp"
#include "wegner2p/stollmann.hpp"

namespace py = pybind11;
using namespace wegner2p;

namespace {

PairPoint pair(const std::string& j) { return pair_point_from_json(Json::parse(j)); }

PotentialField field_from_json(const Json& j) {
  std::map<LatticePoint, double> values;
  for (const auto& e : j) values[lattice_point_from_json(e.at(0))] = e.at(1).get<double>();
  return PotentialField(std::move(values));
}

HamiltonianSpec spec_from(const std::string& config) {
  const ExperimentConfig cfg = experiment_config_from_json(Json::parse(config), ConfigUse::kHamiltonian);
  return cfg.hamiltonian_spec(cfg.center);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "wegner2p native core";
  m.attr("__version__") = kToolVersion;

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<TheoremViolation>(m, "TheoremViolation", PyExc_RuntimeError);

  m.def("sup_norm_pair", [](const std::string& a, const std::string& b) { return sup_norm_pair(pair(a), pair(b)); });
  m.def("box_size", [](const std::string& u, Coord L) { return make_box(pair(u), L).size(); });
  m.def("projection_union_size", [](const std::string& u, Coord L) { return projections(make_box(pair(u), L)).union_size; });
  m.def("distance_condition",
        [](const std::string& u, const std::string& v, Coord L) { return distance_condition(pair(u), pair(v), L); });
  m.def("classify_separation", [](const std::string& u, const std::string& v, Coord L) {
    return classify_separation(pair(u), pair(v), L).names();
  });

  m.def("concentration", [](const std::string& dist, double eps) {
    return concentration(distribution_from_json(Json::parse(dist)), eps);
  });

  m.def("hamiltonian", [](const std::string& config, const std::string& field) {
    return build_hamiltonian(spec_from(config), field_from_json(Json::parse(field))).matrix();
  });
  m.def("eigenvalues", [](const Eigen::MatrixXd& m) { return eigenvalues(SymmetricMatrix(m)).values(); });
  m.def("dist_to_energy", [](std::vector<double> s, double e) { return dist_to_energy(Spectrum(std::move(s)), e); });
  m.def("dist_between_spectra", [](std::vector<double> a, std::vector<double> b) {
    return dist_between_spectra(Spectrum(std::move(a)), Spectrum(std::move(b)));
  });

  m.def(
      "run_single_volume",
      [](const std::string& config, std::size_t threads) {
        const auto cfg = experiment_config_from_json(Json::parse(config), ConfigUse::kSingleVolume);
        py::gil_scoped_release release;
        return to_json(run_single_volume(cfg, threads)).dump();
      },
      py::arg("config"), py::arg("threads") = 1);
  m.def(
      "run_two_volume",
      [](const std::string& config, std::size_t threads) {
        const auto cfg = experiment_config_from_json(Json::parse(config), ConfigUse::kTwoVolume);
        py::gil_scoped_release release;
        return to_json(run_two_volume(cfg, threads)).dump();
      },
      py::arg("config"), py::arg("threads") = 1);

  m.def("stollmann_exact", [](const std::string& function, std::size_t arity, const std::string& dist, double lower,
                              double upper) {
    const auto r = stollmann_exact(dm::by_name(function, arity), distribution_from_json(Json::parse(dist)), {lower, upper});
    return py::make_tuple(r.probability, r.bound, r.holds);
  });

  m.def("cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "wegner2p");
    std::ostringstream out, err;
    const int code = cli::parse_and_dispatch(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
