#include "tsl/commands.hpp"

#include <chrono>
#include <sstream>

namespace tsl {

namespace {

std::optional<std::filesystem::path> resolve_cache_dir(const std::string& dir) {
  if (!dir.empty()) return std::filesystem::path(dir);
  return SumCache::default_dir();
}

class Session {
 public:
  Session(std::string command, Problem problem, const CommandOptions& opt)
      : command_(std::move(command)), pr_(std::move(problem)), opt_(opt) {
    if (opt.ceiling) pr_.limits.ceiling = *opt.ceiling;
    if (opt.k_max) pr_.limits.k_max = *opt.k_max;
    if (auto dir = resolve_cache_dir(opt.cache_dir)) cache_.emplace(*dir);
    resolved_ = {{"field", to_json(pr_.field)}, {"deformation_exponent", pr_.M}, {"ceiling", pr_.limits.ceiling}};
    if (command_ == "basis" || command_ == "fiber") {
      resolved_["lambda"] = opt.lambda;
      resolved_["max_degree"] = opt.max_degree;
    }
  }

  CommandResult run() {
    if (command_ == "analyze") return analyze();
    if (command_ == "check") return check();
    if (command_ == "basis") return basis();
    if (command_ == "fiber") return fiber();
    if (command_ == "global") return global();
    throw Error(ErrorKind::ParseError, "unknown command '" + command_ + "'");
  }

  // Everything that can change the report goes here; wall time and cache
  // statistics only on request so that reruns stay byte-identical.
  Json manifest() const {
    Json m{{"tool", "tsl"},
           {"library_version", TSL_VERSION},
           {"command", command_},
           {"input_hash", pr_.input_hash},
           {"resolved", resolved_}};
    if (opt_.timing) {
      const auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
      m["timing"] = {{"wall_ms", ms},
                     {"cache_hits", cache_ ? cache_->hits() : 0},
                     {"cache_misses", cache_ ? cache_->misses() : 0}};
    }
    return m;
  }

 private:
  SumOptions sum_options() {
    SumOptions s;
    s.ceiling = pr_.limits.ceiling;
    s.cache = cache_ ? &*cache_ : nullptr;
    s.threads = opt_.threads;
    return s;
  }

  Family family() const { return Family::build(pr_.f, pr_.mu, pr_.M, pr_.limits.ceiling); }

  std::vector<ClosedPoint> select_points() const {
    const auto& base = pr_.field;
    const auto& sel = opt_.lambda;
    if (sel == "all") return closed_points(base, opt_.max_degree, pr_.limits.ceiling);
    Code code = 0;
    try {
      if (sel.find(',') != std::string::npos) {
        std::vector<std::uint32_t> coords;
        std::stringstream ss(sel);
        const long p = base->characteristic();
        for (std::string part; std::getline(ss, part, ',');) coords.push_back(((std::stol(part) % p) + p) % p);
        code = base->from_coeffs(coords);
      } else {
        const long long v = std::stoll(sel);
        if (v < 0 || static_cast<unsigned long long>(v) >= base->size()) throw std::out_of_range("code");
        code = static_cast<Code>(v);
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "lambda: expected 'all', an element code in [1, q) or coordinates c0,c1,...");
    }
    if (code == 0) throw Error(ErrorKind::ParseError, "lambda: must be nonzero");
    return {closed_point_of(base, {base, code}, pr_.limits.ceiling)};
  }

  HypothesisReport hypotheses() {
    resolved_["k_max"] = pr_.limits.k_max.value_or(default_search_depth(pr_.field->size(), pr_.mu.size()));
    return check_hypotheses(pr_.f, pr_.mu, pr_.limits.k_max, pr_.limits.ceiling);
  }

  // A search cut short by the ceiling leaves Inconclusive verdicts and no
  // Fail; that is a resource problem rather than a hypothesis failure.
  static int hypothesis_exit(const HypothesisReport& rep) {
    if (rep.all_pass()) return kExitOk;
    for (const auto* h : {&rep.h1, &rep.h2, &rep.h3, &rep.h4, &rep.h5})
      if (h->verdict == Verdict::Fail) return kExitHypothesis;
    return kExitCeiling;
  }

  CommandResult refused(const HypothesisReport& rep) {
    return {{{"hypotheses", hypotheses_json(rep)},
             {"refused", "hypotheses H(i)-H(v) do not all pass"},
             {"manifest", manifest()}},
            hypothesis_exit(rep)};
  }

  CommandResult analyze() {
    auto fam = family();
    Json doc{{"geometry", geometry_json(fam.geometry())}, {"family_hash", fam.hash()}};
    if (!pr_.lower_order.empty())
      doc["relative_polytope"] =
          relative_polytope_json(RelativePolytope::build(fam.geometry(), pr_.M, pr_.lower_order, pr_.s));
    doc["manifest"] = manifest();
    return {doc, kExitOk};
  }

  CommandResult check() {
    const auto rep = hypotheses();
    return {{{"hypotheses", hypotheses_json(rep)}, {"manifest", manifest()}}, hypothesis_exit(rep)};
  }

  CommandResult basis() {
    const auto rep = hypotheses();
    if (!rep.all_pass()) return refused(rep);
    auto fam = family();
    const auto pts = select_points();
    const auto li = verify_lambda_independence(fam, pts, pr_.limits.ceiling);
    Json per_point = Json::array();
    for (std::size_t i = 0; i < pts.size(); ++i)
      per_point.push_back({{"lambda", to_json(pts[i])}, {"basis", basis_json(li.bases[i])}});
    Json doc{{"basis", li.bases.empty() ? Json(nullptr) : basis_json(li.bases.front())},
             {"N", to_string(fam.geometry().N())},
             {"lambda_independent", li.identical},
             {"points", per_point},
             {"manifest", manifest()}};
    return {doc, li.identical ? kExitOk : kExitViolation};
  }

  CommandResult fiber() {
    const auto rep = hypotheses();
    if (!rep.all_pass()) return refused(rep);
    auto fam = family();
    Json reports = Json::array();
    bool all_dominate = true;
    for (const auto& pt : select_points()) {
      auto fr = fiber_L(fam, pt, sum_options());
      all_dominate = all_dominate && fr.dominates;
      reports.push_back(fiber_json(fr));
    }
    return {{{"fibers", reports}, {"N", to_string(fam.geometry().N())}, {"manifest", manifest()}},
            all_dominate ? kExitOk : kExitViolation};
  }

  CommandResult global() {
    const auto rep = hypotheses();
    if (!rep.all_pass()) return refused(rep);
    auto fam = family();
    const OpSpec op = opt_.op.empty() ? pr_.op.value_or(OpSpec::parse("sym1")) : OpSpec::parse(opt_.op);
    const std::uint32_t dmax = opt_.d_max ? *opt_.d_max : pr_.limits.d_max.value_or(1);
    Domain domain;
    if (opt_.domain == "gm" || opt_.domain == "Gm")
      domain = Domain::Gm;
    else if (opt_.domain == "a1" || opt_.domain == "A1")
      domain = Domain::A1;
    else
      throw Error(ErrorKind::ParseError, "domain: expected gm or a1");
    resolved_["op"] = op.name();
    resolved_["d_max"] = dmax;
    resolved_["domain"] = domain_name(domain);
    auto g = global_L_truncated(fam, op, domain, dmax, sum_options());
    return {{{"global", global_json(g)},
             {"degree_bounds", degree_bound_json(degree_bound_report(fam.geometry(), op))},
             {"manifest", manifest()}},
            kExitOk};
  }

  std::string command_;
  Problem pr_;
  CommandOptions opt_;
  std::optional<SumCache> cache_;
  Json resolved_ = Json::object();
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

CommandResult run_command(const std::string& command, Problem problem, const CommandOptions& options) {
  Session s(command, std::move(problem), options);
  return s.run();
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SizeCeilingExceeded: return kExitCeiling;
    case ErrorKind::TheoremViolation:
    case ErrorKind::PolynomialityFailure:
    case ErrorKind::CrossCheckMismatch:
    case ErrorKind::RankMismatch: return kExitViolation;
    default: return kExitError;
  }
}

Json error_report(const Error& e, const std::string& command, const Problem* problem, const CommandOptions& options) {
  Json doc{{"error", {{"kind", std::string(error_kind_name(e.kind()))}, {"message", e.what()}}}};
  if (problem) {
    CommandOptions quiet = options;
    quiet.timing = false;
    doc["manifest"] = Session(command, *problem, quiet).manifest();
  }
  return doc;
}

Json cache_gc(const std::string& cache_dir, bool purge) {
  auto dir = resolve_cache_dir(cache_dir);
  if (!dir) throw Error(ErrorKind::ParseError, "cache gc needs a cache directory or TSL_CACHE_DIR");
  SumCache cache(*dir);
  const auto res = cache.gc(purge);
  return {{"cache_dir", dir->string()}, {"kept", res.kept}, {"removed", res.removed}};
}

}  // namespace tsl
