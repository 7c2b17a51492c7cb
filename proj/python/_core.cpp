#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsl/commands.hpp"

namespace py = pybind11;
using namespace tsl;

namespace {

std::vector<Rational> parse_all(const std::vector<std::string>& xs) {
  std::vector<Rational> out;
  for (const auto& x : xs) out.push_back(parse_rational(x));
  return out;
}

std::vector<std::string> print_all(const Cyclotomic& c) {
  std::vector<std::string> out;
  for (const auto& x : c.coeffs()) out.push_back(to_string(x));
  return out;
}

CommandOptions parse_options(const Json& o) {
  CommandOptions opt;
  if (o.contains("ceiling")) opt.ceiling = o["ceiling"].get<std::uint64_t>();
  if (o.contains("k_max")) opt.k_max = o["k_max"].get<std::uint32_t>();
  if (o.contains("lambda")) opt.lambda = o["lambda"].get<std::string>();
  if (o.contains("max_degree")) opt.max_degree = o["max_degree"].get<std::uint32_t>();
  if (o.contains("op")) opt.op = o["op"].get<std::string>();
  if (o.contains("d_max")) opt.d_max = o["d_max"].get<std::uint32_t>();
  if (o.contains("domain")) opt.domain = o["domain"].get<std::string>();
  if (o.contains("cache_dir")) opt.cache_dir = o["cache_dir"].get<std::string>();
  if (o.contains("threads")) opt.threads = o["threads"].get<unsigned>();
  if (o.contains("timing")) opt.timing = o["timing"].get<bool>();
  return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the tsl package";
  m.attr("__version__") = TSL_VERSION;

  // Exceptions carry the error kind as `kind`.
  // Kept alive for the life of the interpreter.
  static auto* error_type = new py::object(py::exception<Error>(m, "Error", PyExc_RuntimeError));
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const Error& e) {
      py::object inst = (*error_type)(e.what());
      inst.attr("kind") = std::string(error_kind_name(e.kind()));
      PyErr_SetObject(error_type->ptr(), inst.ptr());
    }
  });

  m.def(
      "run",
      [](const std::string& command, const std::string& problem_json, const std::string& options_json) {
        Json doc;
        try {
          doc = Json::parse(problem_json);
        } catch (const Json::exception& e) {
          throw Error(ErrorKind::ParseError, std::string("problem is not valid JSON: ") + e.what());
        }
        auto problem = parse_problem(doc);
        const auto options = parse_options(Json::parse(options_json));
        CommandResult res;
        {
          py::gil_scoped_release release;
          res = run_command(command, std::move(problem), options);
        }
        return py::make_tuple(res.report.dump(), res.exit_code);
      },
      py::arg("command"), py::arg("problem_json"), py::arg("options_json") = "{}",
      "Runs a command on a JSON problem; returns (report_json, exit_code).");

  m.def(
      "cache_gc", [](const std::string& dir, bool purge) { return cache_gc(dir, purge).dump(); },
      py::arg("cache_dir") = "", py::arg("purge") = false);

  m.def(
      "op_char_poly",
      [](std::uint32_t p, const std::vector<std::vector<std::string>>& coeffs, const std::string& op) {
        Series P;
        for (const auto& c : coeffs) P.push_back(Cyclotomic::from_powers(p, parse_all(c)));
        std::vector<std::vector<std::string>> out;
        for (const auto& c : op_char_poly(P, OpSpec::parse(op))) out.push_back(print_all(c));
        return out;
      },
      py::arg("p"), py::arg("coeffs"), py::arg("op"),
      "Coefficients are lists of rationals on 1, zeta_p, zeta_p^2, ...; results use the basis 1, ..., zeta_p^(p-2).");

  m.def(
      "ord_p",
      [](std::uint32_t p, const std::vector<std::string>& powers) -> std::optional<std::string> {
        auto v = ord_p(Cyclotomic::from_powers(p, parse_all(powers)));
        if (!v) return std::nullopt;
        return to_string(*v);
      },
      py::arg("p"), py::arg("powers"));

  m.def(
      "exp_sum",
      [](const std::string& problem_json, const std::vector<std::int64_t>& lambda, std::uint32_t r, unsigned threads,
         std::optional<std::uint64_t> ceiling) {
        auto pr = parse_problem(Json::parse(problem_json));
        const auto& base = pr.field;
        if (lambda.size() != base->degree())
          throw Error(ErrorKind::LengthMismatch, "lambda needs " + std::to_string(base->degree()) + " coordinates");
        std::vector<std::uint32_t> coords;
        const std::int64_t p = base->characteristic();
        for (auto c : lambda) coords.push_back(static_cast<std::uint32_t>(((c % p) + p) % p));
        const Code code = base->from_coeffs(coords);
        SumOptions opts;
        opts.ceiling = ceiling.value_or(pr.limits.ceiling);
        opts.threads = threads;
        Cyclotomic s;
        {
          py::gil_scoped_release release;
          auto fam = Family::build(pr.f, pr.mu, pr.M, opts.ceiling);
          s = code == 0 ? zero_fiber_sum(fam, r, opts)
                        : exp_sum(fam, closed_point_of(base, {base, code}, opts.ceiling), r, opts);
        }
        return print_all(s);
      },
      py::arg("problem_json"), py::arg("lambda_"), py::arg("r") = 1, py::arg("threads") = 0,
      py::arg("ceiling") = std::nullopt,
      "Character sum of the fiber at lambda (coordinates over the base field) over the degree-r extension of "
      "its residue field; lambda = 0 gives the zero fiber.");
}
