// Command line front end: reads a JSON problem file and writes JSON reports.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tsl/commands.hpp"

using namespace tsl;

namespace {

void emit(const std::string& path, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact geometry, cohomology and L-functions for one-parameter toric exponential sum families"};
  app.set_version_flag("--version", std::string(TSL_VERSION));
  app.require_subcommand(1);
  CommandOptions opt;
  std::string problem_path, json_out;
  bool purge = false;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--problem", problem_path, "JSON problem file")->required()->check(CLI::ExistingFile);
    sc->add_option("--json-out", json_out, "write the report here instead of stdout");
    sc->add_option("--ceiling", opt.ceiling, "largest torus or field size to enumerate");
    sc->add_option("--kmax", opt.k_max, "nondegeneracy search depth")->check(CLI::PositiveNumber);
    sc->add_option("--cache-dir", opt.cache_dir, "character sum cache (default $TSL_CACHE_DIR)");
    sc->add_option("--threads", opt.threads, "worker threads for sums (0 = all cores)");
    sc->add_flag("--timing", opt.timing, "add wall time and cache statistics to the manifest");
  };
  auto lambda_opts = [&](CLI::App* sc) {
    sc->add_option("--lambda", opt.lambda, "'all', an element code, or coordinates c0,c1,...");
    sc->add_option("--max-degree", opt.max_degree, "largest closed point degree for --lambda all")
        ->check(CLI::PositiveNumber);
  };

  common(app.add_subcommand("analyze", "polytope geometry, weights and chambers"));
  common(app.add_subcommand("check", "hypotheses H(i)-H(v)"));
  auto* basis = app.add_subcommand("basis", "monomial basis of the top cohomology");
  common(basis);
  lambda_opts(basis);
  auto* fiber = app.add_subcommand("fiber", "fiber sums, L-polynomials and Newton polygons");
  common(fiber);
  lambda_opts(fiber);
  auto* global = app.add_subcommand("global", "truncated global L-function of a linear algebra operation");
  common(global);
  global->add_option("--op", opt.op, "operation such as sym2, ext2 or sym1*ext2");
  global->add_option("--dmax", opt.d_max, "truncation degree");
  global->add_option("--domain", opt.domain, "gm or a1")->check(CLI::IsMember({"gm", "a1", "Gm", "A1"}));
  auto* cache = app.add_subcommand("cache", "manage the character sum cache");
  cache->require_subcommand(1);
  auto* gc = cache->add_subcommand("gc", "drop unreadable entries (or everything with --all)");
  gc->add_option("--cache-dir", opt.cache_dir, "cache directory (default $TSL_CACHE_DIR)");
  gc->add_flag("--all", purge, "remove every entry");
  gc->add_option("--json-out", json_out, "write the summary here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::optional<Problem> problem;
  try {
    if (gc->parsed()) {
      emit(json_out, cache_gc(opt.cache_dir, purge));
      return kExitOk;
    }
    problem = load_problem(problem_path);
    auto result = run_command(command, *problem, opt);
    emit(json_out, result.report);
    return result.exit_code;
  } catch (const Error& e) {
    std::cerr << "tsl: " << e.what() << "\n";
    try {
      emit(json_out, error_report(e, command, problem ? &*problem : nullptr, opt));
    } catch (const std::exception&) {
    }
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "tsl: " << e.what() << "\n";
    return kExitError;
  }
}
