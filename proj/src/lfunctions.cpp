#include "tsl/lfunctions.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "tsl/errors.hpp"
#include "tsl/hypotheses.hpp"

namespace tsl {

namespace {

// |base|^k, or SizeCeilingExceeded when it passes `limit`.
std::uint64_t power_within(std::uint64_t base, std::uint64_t k, std::uint64_t limit) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (r > limit / base)
      throw Error(ErrorKind::SizeCeilingExceeded, "field of size " + std::to_string(base) + "^" + std::to_string(k) +
                                                      " exceeds the ceiling " + std::to_string(limit));
    r *= base;
  }
  return r;
}

// The extension of the base field of `family` of relative degree k, after
// checking that its n-dimensional torus fits under the ceiling.
FieldPtr extension(const FieldPtr& base, std::uint64_t k, std::size_t n, std::uint64_t ceiling) {
  const std::uint64_t Q = power_within(base->size(), k, ceiling + 1);
  require_torus_within(Q, n, ceiling);
  return standard_field(base->characteristic(), static_cast<std::uint32_t>(base->degree() * k), ceiling);
}

Cyclotomic cached_sum(const SumOptions& opts, const std::string& header, const LaurentPolynomial& g) {
  if (opts.cache)
    if (auto hit = opts.cache->load(header)) return *hit;
  auto value = torus_character_sum(g, opts.ceiling, opts.threads);
  if (opts.cache) opts.cache->store(header, value);
  return value;
}

Cyclotomic one(std::uint32_t p) { return Cyclotomic(p, Rational(1)); }

// Complete (h) or elementary (e) symmetric functions 0..k from power sums
// ps[1..k] by Newton's identities.
std::vector<Cyclotomic> from_power_sums(const std::vector<Cyclotomic>& ps, std::uint32_t k, OpFactor::Kind kind,
                                        std::uint32_t p) {
  std::vector<Cyclotomic> out(k + 1, Cyclotomic(p));
  out[0] = one(p);
  for (std::uint32_t j = 1; j <= k; ++j) {
    Cyclotomic acc(p);
    for (std::uint32_t i = 1; i <= j; ++i) {
      auto term = out[j - i] * ps[i];
      if (kind == OpFactor::Kind::Ext && i % 2 == 0)
        acc -= term;
      else
        acc += term;
    }
    out[j] = acc * Rational(1, static_cast<long>(j));
  }
  return out;
}

std::uint32_t max_power(const OpSpec& op) {
  std::uint32_t k = 0;
  for (const auto& f : op.factors) k = std::max(k, f.power);
  return k;
}

// Tr L(A) from the power sums ps[i] = Tr A^i, i = 1..max_power(op).
Cyclotomic op_trace(const OpSpec& op, const std::vector<Cyclotomic>& ps, std::uint32_t p) {
  Cyclotomic t = one(p);
  for (const auto& f : op.factors) t *= from_power_sums(ps, f.power, f.kind, p)[f.power];
  return t;
}

Integer binomial(std::int64_t n, std::int64_t k) {
  if (k == 0) return 1;
  if (k < 0 || n < k) return 0;
  Integer r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string point_header(const Family& family, const std::string& point, std::uint32_t r) {
  std::ostringstream os;
  os << "tsl-sum v1\nfamily " << family.hash() << "\npoint " << point << "\nr " << r << "\n";
  return os.str();
}

// Series for P(T^deg) truncated to T^order.
Series substitute_power(const Series& P, std::uint32_t deg, std::size_t order, std::uint32_t p) {
  Series out(order + 1, Cyclotomic(p));
  for (std::size_t i = 0; i < P.size() && i * deg <= order; ++i) out[i * deg] = P[i];
  return out;
}

Series zero_fiber_lpoly(const Family& family, const SumOptions& opts) {
  const std::size_t n = family.dimension();
  const std::size_t cap = 2 * static_cast<std::size_t>(family.geometry().N()) + 2;
  std::vector<Cyclotomic> sums;
  for (std::size_t R = 1; R <= cap; ++R) {
    sums.push_back(zero_fiber_sum(family, static_cast<std::uint32_t>(R), opts));
    auto series = lpoly_series(sums, n, R);
    std::size_t last = 0;
    for (std::size_t i = 0; i <= R; ++i)
      if (!series[i].is_zero()) last = i;
    if (R >= std::max<std::size_t>(2 * last, last + 1)) {
      series.resize(last + 1);
      for (const auto& c : series)
        if (!c.is_integral())
          throw Error(ErrorKind::PolynomialityFailure, "lambda = 0 fiber has a non-integral coefficient");
      return series;
    }
  }
  throw Error(ErrorKind::PolynomialityFailure,
              "lambda = 0 fiber shows no polynomial of degree <= " + std::to_string(cap / 2) + " in its first " +
                  std::to_string(cap) + " sums");
}

}  // namespace

Cyclotomic torus_character_sum(const LaurentPolynomial& g, std::uint64_t ceiling, unsigned threads) {
  const auto& K = g.field();
  const std::size_t n = g.dimension();
  const std::uint32_t p = K->characteristic();
  Torus torus(K, n, ceiling);
  std::vector<IVec> exps;
  std::vector<std::int64_t> clog;
  for (const auto& [v, c] : g.terms()) {
    exps.push_back(v);
    clog.push_back(K->log(c));
  }
  const std::int64_t U = static_cast<std::int64_t>(K->unit_order());
  const unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  const auto ranges = torus.chunks(workers);
  std::vector<std::vector<std::int64_t>> counts(ranges.size(), std::vector<std::int64_t>(p, 0));

  auto work = [&](std::size_t w) {
    auto& cnt = counts[w];
    const auto& F = *K;
    torus.for_each(ranges[w].first, ranges[w].second, [&](const std::vector<std::uint64_t>& logs, const auto&) {
      Code val = 0;
      for (std::size_t t = 0; t < exps.size(); ++t) {
        std::int64_t e = clog[t];
        for (std::size_t j = 0; j < n; ++j) e += exps[t][j] * static_cast<std::int64_t>(logs[j]);
        e %= U;
        if (e < 0) e += U;
        val = F.add(val, F.exp(static_cast<std::uint64_t>(e)));
      }
      ++cnt[F.absolute_trace(val)];
    });
  };
  if (ranges.size() <= 1) {
    if (!ranges.empty()) work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < ranges.size(); ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<std::int64_t> total(p, 0);
  for (const auto& c : counts)
    for (std::uint32_t i = 0; i < p; ++i) total[i] += c[i];
  return Cyclotomic::from_counts(p, total);
}

// ---------------------------------------------------------------------------
// Cache

SumCache::SumCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

std::optional<std::filesystem::path> SumCache::default_dir() {
  const char* env = std::getenv("TSL_CACHE_DIR");
  if (!env || !*env) return std::nullopt;
  return std::filesystem::path(env);
}

std::filesystem::path SumCache::path_for(const std::string& header) const {
  return dir_ / (fnv1a_hex(header) + ".sum");
}

namespace {

// Parses a cache file into its header and value; nullopt when malformed.
std::optional<std::pair<std::string, Cyclotomic>> read_entry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string header, line;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(in, line)) return std::nullopt;
    header += line + "\n";
  }
  if (header.rfind("tsl-sum v1\n", 0) != 0) return std::nullopt;
  std::uint32_t p = 0;
  if (!std::getline(in, line) || line.rfind("p ", 0) != 0) return std::nullopt;
  try {
    p = static_cast<std::uint32_t>(std::stoul(line.substr(2)));
    if (!is_prime(p)) return std::nullopt;
    std::vector<Rational> coeffs;
    while (std::getline(in, line))
      if (!line.empty()) coeffs.push_back(parse_rational(line));
    if (coeffs.size() != p - 1) return std::nullopt;
    return std::make_pair(header, Cyclotomic::from_powers(p, coeffs));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<Cyclotomic> SumCache::load(const std::string& header) const {
  auto entry = read_entry(path_for(header));
  if (!entry || entry->first != header) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return entry->second;
}

void SumCache::store(const std::string& header, const Cyclotomic& value) const {
  const auto path = path_for(header);
  auto tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp);
    out << header << "p " << value.prime() << "\n";
    for (const auto& c : value.coeffs()) out << to_string(c) << "\n";
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

SumCache::GcResult SumCache::gc(bool purge) const {
  GcResult res;
  std::vector<std::filesystem::path> doomed;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (!entry.is_regular_file()) continue;
    const auto& path = entry.path();
    bool keep = !purge && path.extension() == ".sum";
    if (keep) {
      auto parsed = read_entry(path);
      keep = parsed && path_for(parsed->first) == path;
    }
    if (keep)
      ++res.kept;
    else
      doomed.push_back(path);
  }
  for (const auto& path : doomed) {
    std::error_code ec;
    if (std::filesystem::remove(path, ec)) ++res.removed;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Sums and fiber L-polynomials

Cyclotomic exp_sum(const Family& family, const ClosedPoint& point, std::uint32_t r, const SumOptions& opts) {
  if (r == 0) throw Error(ErrorKind::PreconditionFailed, "r must be positive");
  const auto& Kd = point.representative.field;
  const auto Kr = extension(family.base_field(), static_cast<std::uint64_t>(point.degree) * r, family.dimension(),
                            opts.ceiling);
  const auto up = Embedding::between(Kd, Kr);
  LaurentPolynomial g(Kr, family.dimension());
  for (const auto& [v, c] : family.f().terms()) g.add_term(v, up(point.base_embedding(c)));
  g.add_term(family.mu(), up(Kd->pow(point.representative.code, family.lambda_exponent())));
  const std::string where =
      "degree=" + std::to_string(point.degree) + " code=" + std::to_string(point.representative.code);
  return cached_sum(opts, point_header(family, where, r), g);
}

Cyclotomic zero_fiber_sum(const Family& family, std::uint32_t r, const SumOptions& opts) {
  if (r == 0) throw Error(ErrorKind::PreconditionFailed, "r must be positive");
  const auto Kr = extension(family.base_field(), r, family.dimension(), opts.ceiling);
  const auto g = family.zero_fiber(Embedding::between(family.base_field(), Kr));
  return cached_sum(opts, point_header(family, "zero", r), g);
}

Series lpoly_series(const std::vector<Cyclotomic>& sums, std::size_t n, std::size_t order) {
  if (sums.empty()) throw Error(ErrorKind::PreconditionFailed, "no sums supplied");
  const std::uint32_t p = sums[0].prime();
  const long sign = n % 2 == 1 ? 1 : -1;  // (-1)^{n+1}
  Series log_series(order + 1, Cyclotomic(p));
  for (std::size_t r = 1; r <= order && r <= sums.size(); ++r)
    log_series[r] = sums[r - 1] * Rational(sign, static_cast<long>(r));
  return series_exp(log_series, order);
}

Series fiber_lpoly(const Family& family, const ClosedPoint& point, const SumOptions& opts,
                   std::vector<Cyclotomic>* sums_out) {
  const std::size_t N = static_cast<std::size_t>(family.geometry().N());
  // Check the largest torus before spending time on the smaller ones.
  extension(family.base_field(), static_cast<std::uint64_t>(point.degree) * 2 * N, family.dimension(), opts.ceiling);
  std::vector<Cyclotomic> sums;
  for (std::uint32_t r = 1; r <= 2 * N; ++r) sums.push_back(exp_sum(family, point, r, opts));
  auto series = lpoly_series(sums, family.dimension(), 2 * N);
  for (std::size_t i = N + 1; i <= 2 * N; ++i)
    if (!series[i].is_zero())
      throw Error(ErrorKind::PolynomialityFailure,
                  "coefficient of T^" + std::to_string(i) + " is " + series[i].to_string() + ", expected 0");
  series.resize(N + 1);
  for (std::size_t i = 0; i <= N; ++i)
    if (!series[i].is_integral())
      throw Error(ErrorKind::PolynomialityFailure,
                  "coefficient of T^" + std::to_string(i) + " is not integral: " + series[i].to_string());
  if (series[N].is_zero())
    throw Error(ErrorKind::PolynomialityFailure, "L-polynomial has degree below N = " + std::to_string(N));
  if (sums_out) *sums_out = std::move(sums);
  return series;
}

NewtonPolygon np_lower_bound(const BasisB& basis) { return NewtonPolygon::from_slopes(basis.weights()); }

FiberLReport fiber_L(const Family& family, const ClosedPoint& point, const SumOptions& opts) {
  FiberLReport rep;
  rep.lambda = point;
  rep.lpoly = fiber_lpoly(family, point, opts, &rep.sums);
  const Rational unit(static_cast<long>(family.base_field()->degree() * point.degree));
  rep.polygon = newton_polygon(rep.lpoly, unit);
  rep.basis = compute_basis(family, point, std::nullopt, opts.ceiling);
  rep.bound = np_lower_bound(rep.basis);
  rep.dominates = polygon_dominates(rep.polygon, rep.bound);
  return rep;
}

// ---------------------------------------------------------------------------
// Linear algebra operations

OpSpec OpSpec::parse(const std::string& text) {
  OpSpec op;
  std::string s;
  for (char ch : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find_first_of("*,", pos);
    if (end == std::string::npos) end = s.size();
    const std::string tok = s.substr(pos, end - pos);
    OpFactor f;
    std::string digits;
    for (const std::string prefix : {"sym", "ext", "wedge", "alt"}) {
      if (tok.rfind(prefix, 0) == 0) {
        f.kind = prefix == "sym" ? OpFactor::Kind::Sym : OpFactor::Kind::Ext;
        digits = tok.substr(prefix.size());
        break;
      }
    }
    if (digits.empty() || digits.size() > 4 || !std::all_of(digits.begin(), digits.end(), ::isdigit))
      throw Error(ErrorKind::ParseError, "cannot read operation factor '" + tok + "' in '" + text + "'");
    f.power = static_cast<std::uint32_t>(std::stoul(digits));
    op.factors.push_back(f);
    pos = end + 1;
  }
  if (op.factors.empty()) throw Error(ErrorKind::ParseError, "empty operation '" + text + "'");
  return op;
}

std::string OpSpec::name() const {
  std::string out;
  for (const auto& f : factors) {
    if (!out.empty()) out += "*";
    out += (f.kind == OpFactor::Kind::Sym ? "sym" : "ext") + std::to_string(f.power);
  }
  return out;
}

std::uint32_t OpSpec::order() const {
  std::uint32_t total = 0;
  for (const auto& f : factors) total += f.power;
  return std::max(total, 1u);
}

Integer OpSpec::dimension(std::size_t N) const {
  Integer d = 1;
  const auto n = static_cast<std::int64_t>(N);
  for (const auto& f : factors)
    d *= f.kind == OpFactor::Kind::Sym ? binomial(n + f.power - 1, f.power) : binomial(n, f.power);
  return d;
}

Series op_char_poly(const Series& P, const OpSpec& op) {
  if (P.empty()) throw Error(ErrorKind::BadConstantTerm, "empty polynomial");
  const std::uint32_t p = P[0].prime();
  if (P[0] != one(p)) throw Error(ErrorKind::BadConstantTerm, "constant term is " + P[0].to_string() + ", not 1");
  std::size_t N = P.size() - 1;
  while (N > 0 && P[N].is_zero()) --N;
  const Integer dim_big = op.dimension(N);
  if (dim_big > 100000) throw Error(ErrorKind::SizeCeilingExceeded, "operation dimension too large");
  const auto D = static_cast<std::size_t>(dim_big);
  if (D == 0) return {one(p)};
  const std::uint32_t K = max_power(op);
  const std::size_t top = D * std::max<std::uint32_t>(K, 1);
  // p_j = sum of j-th powers of the reciprocal roots = -j [T^j] log P.
  const auto logP = series_log(Series(P.begin(), P.begin() + static_cast<std::ptrdiff_t>(N) + 1), top);
  std::vector<Cyclotomic> psum(top + 1, Cyclotomic(p));
  for (std::size_t j = 1; j <= top; ++j) psum[j] = logP[j] * Rational(-static_cast<long>(j));
  Series log_out(D + 1, Cyclotomic(p));
  std::vector<Cyclotomic> ps(K + 1, Cyclotomic(p));
  for (std::size_t r = 1; r <= D; ++r) {
    for (std::uint32_t i = 1; i <= K; ++i) ps[i] = psum[r * i];
    log_out[r] = op_trace(op, ps, p) * Rational(-1, static_cast<long>(r));
  }
  return series_exp(log_out, D);
}

// ---------------------------------------------------------------------------
// Global L-functions

std::string domain_name(Domain d) { return d == Domain::Gm ? "Gm" : "A1"; }

GlobalLTruncation global_L_truncated(const Family& family, const OpSpec& op, Domain domain, std::uint32_t d_max,
                                     const SumOptions& opts) {
  const auto& base = family.base_field();
  const std::uint32_t p = base->characteristic();
  const std::size_t n = family.dimension();
  if (domain == Domain::A1 && family.lambda_exponent() < 0)
    throw Error(ErrorKind::PreconditionFailed, "the affine line needs a nonnegative power of lambda");
  GlobalLTruncation out;
  out.op = op;
  out.domain = domain;
  out.d_max = d_max;

  // Closed-point product.
  Series euler(d_max + 1, Cyclotomic(p));
  euler[0] = one(p);
  auto multiply_factor = [&](const Series& P, std::uint32_t deg) {
    const auto Q = op_char_poly(P, op);
    euler = series_mul(euler, series_inverse(substitute_power(Q, deg, d_max, p), d_max), d_max);
  };
  if (d_max > 0) {
    // An operation of total power 0 ignores the eigenvalues.
    const bool trivial = max_power(op) == 0;
    for (const auto& pt : closed_points(base, d_max, opts.ceiling)) {
      multiply_factor(trivial ? Series{one(p)} : fiber_lpoly(family, pt, opts), pt.degree);
      ++out.closed_points_used;
    }
    if (domain == Domain::A1) {
      out.zero_fiber_lpoly = trivial ? Series{one(p)} : zero_fiber_lpoly(family, opts);
      if (!trivial) out.zero_fiber_degree = out.zero_fiber_lpoly.size() - 1;
      multiply_factor(out.zero_fiber_lpoly, 1);
      ++out.closed_points_used;
    }
  }
  out.coefficients = euler;

  // Moments: every lambda in F_{q^r}, with traces of Frobenius powers read off
  // directly from character sums over F_{q^{r i}}.
  const std::uint32_t K = max_power(op);
  const Rational sign(n % 2 == 0 ? 1 : -1);  // Tr Frob^i = (-1)^n S_i
  Series log_moments(d_max + 1, Cyclotomic(p));
  for (std::uint32_t r = 1; r <= d_max; ++r) {
    const auto Er = extension(base, r, n, opts.ceiling);
    const auto to_Er = Embedding::between(base, Er);
    std::vector<std::pair<FieldPtr, Embedding>> towers;
    for (std::uint32_t i = 1; i <= K; ++i) {
      const auto Ei = extension(base, static_cast<std::uint64_t>(r) * i, n, opts.ceiling);
      towers.emplace_back(Ei, Embedding::between(Er, Ei));
    }
    Cyclotomic M(p);
    auto add_lambda = [&](std::optional<Code> lambda) {
      std::vector<Cyclotomic> ps(K + 1, Cyclotomic(p));
      for (std::uint32_t i = 1; i <= K; ++i) {
        const auto& [Ei, up] = towers[i - 1];
        LaurentPolynomial g(Ei, n);
        for (const auto& [v, c] : family.f().terms()) g.add_term(v, up(to_Er(c)));
        if (lambda) g.add_term(family.mu(), up(Er->pow(*lambda, family.lambda_exponent())));
        ps[i] = torus_character_sum(g, opts.ceiling, opts.threads) * sign;
      }
      M += op_trace(op, ps, p);
    };
    for (std::uint64_t k = 0; k < Er->unit_order(); ++k) add_lambda(Er->exp(k));
    if (domain == Domain::A1) add_lambda(std::nullopt);
    log_moments[r] = M * Rational(1, static_cast<long>(r));
  }
  out.moments = series_exp(log_moments, d_max);
  out.agree = out.moments == out.coefficients;
  if (!out.agree) {
    std::ostringstream os;
    os << "closed-point product and moment series differ:";
    for (std::size_t i = 0; i <= d_max; ++i)
      if (out.moments[i] != out.coefficients[i])
        os << " T^" << i << ": " << out.coefficients[i].to_string() << " vs " << out.moments[i].to_string() << ";";
    throw Error(ErrorKind::CrossCheckMismatch, os.str());
  }
  return out;
}

DegreeBoundReport degree_bound_report(const GeometryContext& ctx, const OpSpec& op) {
  DegreeBoundReport rep;
  rep.op = op.name();
  rep.order = op.order();
  rep.op_dimension = op.dimension(static_cast<std::size_t>(ctx.N()));
  rep.degree_bound = Rational(ctx.D()) / ctx.gap();
  Integer two_power = 1;
  two_power <<= static_cast<unsigned>(1 + 2 * ctx.dimension() * rep.order);
  const Rational scale = Rational(rep.op_dimension) * rep.degree_bound * Rational(two_power);
  rep.total_degree_gm = scale * 5;
  rep.total_degree_a1 = scale * 6;
  rep.ord_q_lower_bound = rep.degree_bound;
  rep.forces_equal_degrees = rep.degree_bound < 1;
  return rep;
}

// ---------------------------------------------------------------------------
// Multi-parameter sums

std::uint32_t multipoint_degree(const MultiPoint& point) {
  const auto& K = *point.base_to_field.target();
  const auto& base = *point.base_to_field.source();
  const std::uint32_t rel = K.degree() / base.degree();
  std::vector<Code> coords = point.t;
  coords.push_back(point.lambda);
  for (std::uint32_t d = 1; d <= rel; ++d) {
    if (rel % d) continue;
    const std::uint64_t qd = power_within(base.size(), d, K.size());
    const std::int64_t e = static_cast<std::int64_t>(qd % K.unit_order());
    if (std::all_of(coords.begin(), coords.end(), [&](Code x) { return x == 0 || K.pow(x, e == 0 ? K.unit_order() : e) == x; }))
      return d;
  }
  return rel;
}

Cyclotomic multiparam_exp_sum(const LaurentPolynomial& H, std::size_t s, const MultiPoint& point, std::uint32_t r,
                              const SumOptions& opts) {
  if (H.field() != point.base_to_field.source())
    throw Error(ErrorKind::PreconditionFailed, "point embedding does not start at the field of H");
  if (point.t.size() != s)
    throw Error(ErrorKind::LengthMismatch, "t has " + std::to_string(point.t.size()) + " coordinates, expected " +
                                               std::to_string(s));
  if (H.dimension() < s + 2)
    throw Error(ErrorKind::LengthMismatch, "H needs variables t_1..t_s, Lambda and at least one x");
  if (point.lambda == 0 || std::any_of(point.t.begin(), point.t.end(), [](Code c) { return c == 0; }))
    throw Error(ErrorKind::PreconditionFailed, "(t, lambda) must lie on the torus");
  if (r == 0) throw Error(ErrorKind::PreconditionFailed, "r must be positive");
  const auto& base = H.field();
  const std::size_t n = H.dimension() - s - 1;
  const auto& K = point.base_to_field.target();
  const std::uint32_t deg = multipoint_degree(point);

  // Pull the coordinates back into the default-modulus field of degree deg.
  const auto sub = standard_field(base->characteristic(), base->degree() * deg, opts.ceiling);
  const auto into_K = Embedding::between(sub, K);
  std::unordered_map<Code, Code> back;
  for (Code a = 0; a < sub->size(); ++a) back[into_K(a)] = a;
  auto pull = [&](Code x) {
    auto it = back.find(x);
    if (it == back.end()) throw Error(ErrorKind::PreconditionFailed, "coordinate outside F_q(t, lambda)");
    return it->second;
  };

  const auto L = extension(base, static_cast<std::uint64_t>(deg) * r, n, opts.ceiling);
  const auto up = Embedding::between(sub, L);
  LaurentPolynomial g(L, n);
  for (const auto& [e, c] : H.terms()) {
    Code coeff = pull(point.base_to_field(c));
    for (std::size_t i = 0; i < s; ++i) coeff = sub->mul(coeff, sub->pow(pull(point.t[i]), e[i]));
    coeff = sub->mul(coeff, sub->pow(pull(point.lambda), e[s]));
    g.add_term(IVec(e.begin() + static_cast<std::ptrdiff_t>(s) + 1, e.end()), up(coeff));
  }
  return torus_character_sum(g, opts.ceiling, opts.threads);
}

}  // namespace tsl
