// Command-line front end: diagonalize, count eigenvalues in an interval,
// translate between expression formats, cross-check against the dense
// oracle, generate random expressions, and benchmark.
//
// Exit codes: 0 success, 1 parse/input error, 2 invariant violation,
// 3 check mismatch.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <eigloc/eigloc.hpp>

namespace {

using namespace eigloc;

struct SpecOptions {
  std::string name = "adjacency";
  std::string w = "1";
  std::string diagonal_path;
};

void add_spec_options(CLI::App* cmd, SpecOptions& s) {
  cmd->add_option("--spec", s.name, "matrix preset: adjacency|laplacian|signless-laplacian|custom")
      ->default_val("adjacency");
  cmd->add_option("--w", s.w, "off-diagonal value for --spec custom (default 1)");
  cmd->add_option("--diagonal", s.diagonal_path, "diagonal file for --spec custom (lines: <vertex> <value>)");
}

MatrixSpec build_spec(const SpecOptions& s, const SlickExpr& e) {
  if (s.name == "adjacency") return MatrixSpec::adjacency();
  if (s.name == "laplacian") return MatrixSpec::laplacian(eval_slick(e));
  if (s.name == "signless-laplacian") return MatrixSpec::signless_laplacian(eval_slick(e));
  if (s.name == "custom") {
    MatrixSpec spec;
    spec.off_diag = Rational::parse(s.w);
    spec.diagonal.assign(e.n_vertices(), Rational(0));
    if (!s.diagonal_path.empty()) {
      std::map<std::string, int> by_name;
      for (int v = 0; v < e.n_vertices(); ++v) by_name[e.vertex_names[v]] = v;
      std::istringstream in(read_file(s.diagonal_path));
      std::string name, value;
      while (in >> name >> value) {
        auto it = by_name.find(name);
        if (it == by_name.end()) throw std::runtime_error("diagonal file names unknown vertex '" + name + "'");
        spec.diagonal[it->second] = Rational::parse(value);
      }
    }
    return spec;
  }
  throw std::runtime_error("unknown spec preset '" + s.name + "'");
}

SlickExpr load_slick(const std::string& path, const std::string& format) {
  const std::string text = read_file(path);
  if (format == "classic") return classic_to_slick(parse_classic(text));
  return parse_slick(text);
}

DiagOptions trace_options(bool trace) {
  DiagOptions opt;
  if (trace)
    opt.observer = [](int node, const KBox& b, std::span<const DiagEntry> em) {
      std::cerr << "node=" << node << " kp=" << b.kp() << " kpp=" << b.kpp() << " emit=[";
      for (std::size_t i = 0; i < em.size(); ++i) std::cerr << (i ? "," : "") << em[i].value;
      std::cerr << "]\n";
    };
  return opt;
}

int cmd_diag(const std::string& input, const std::string& format, const std::string& c_str,
             const SpecOptions& sopt, bool trace) {
  const SlickExpr e = load_slick(input, format);
  const MatrixSpec spec = build_spec(sopt, e);
  const DiagList d = diagonalize(e, Rational::parse(c_str), spec, trace_options(trace));
  for (const auto& entry : d) std::cout << entry.value << "\n";
  const Inertia in = inertia(d);
  std::cout << "inertia: n+=" << in.n_plus << " n0=" << in.n_zero << " n-=" << in.n_minus << "\n";
  return 0;
}

int cmd_count(const std::string& input, const std::string& format, const std::string& interval_str,
              const SpecOptions& sopt) {
  const SlickExpr e = load_slick(input, format);
  const MatrixSpec spec = build_spec(sopt, e);
  const long n = count_eigenvalues(e, parse_interval(interval_str), spec);
  std::cout << "count: " << n << "\n";
  return 0;
}

int cmd_translate(const std::string& input, const std::string& format) {
  const std::string text = read_file(input);
  if (format == "classic") {
    print_slick(std::cout, classic_to_slick(parse_classic(text)));
  } else {
    print_classic(std::cout, slick_to_classic(parse_slick(text)));
  }
  return 0;
}

Rational diag_product(const DiagList& d) {
  Rational p(1);
  for (const auto& e : d) p *= e.value;
  return p;
}

bool check_one(const SlickExpr& e, const Rational& c, const MatrixSpec& spec, bool verbose) {
  const DiagList d = diagonalize(e, c, spec);
  const Inertia got = inertia(d);
  const Inertia want = oracle_inertia(e, c, spec);
  const Rational prod = diag_product(d);
  const Rational det = determinant(build_matrix(eval_slick(e), c, spec));
  const bool ok = got == want && prod == det;
  if (verbose) {
    std::cout << "engine: n+=" << got.n_plus << " n0=" << got.n_zero << " n-=" << got.n_minus
              << " product=" << prod << "\n";
    std::cout << "oracle: n+=" << want.n_plus << " n0=" << want.n_zero << " n-=" << want.n_minus
              << " det=" << det << "\n";
    std::cout << (ok ? "MATCH" : "MISMATCH") << "\n";
  }
  return ok;
}

int cmd_check(const std::string& input, const std::string& format, const std::string& c_str,
              const SpecOptions& sopt, int fuzz, int max_n, int max_k, std::uint64_t seed) {
  if (fuzz <= 0) {
    const SlickExpr e = load_slick(input, format);
    if (e.n_vertices() > 2000) throw std::runtime_error("graph too large for the dense oracle (n > 2000)");
    return check_one(e, Rational::parse(c_str), build_spec(sopt, e), true) ? 0 : 3;
  }
  const std::vector<Rational> shifts = {Rational(-2), Rational(-1), Rational(-1, 2), Rational(0),
                                        Rational(1, 2), Rational(1),  Rational(2)};
  int good = 0;
  for (int i = 0; i < fuzz; ++i) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
    const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n));
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_k));
    const Rational c = shifts[rng() % shifts.size()];
    const SlickExpr e = gen_slick(n, k, rng());
    if (check_one(e, c, MatrixSpec::adjacency(), false)) {
      ++good;
    } else {
      std::cerr << "mismatch at case " << i << " (n=" << n << " k=" << k << " c=" << c << ")\n";
    }
  }
  std::cout << good << "/" << fuzz << " MATCH\n";
  return good == fuzz ? 0 : 3;
}

int cmd_gen(int n, int k, std::uint64_t seed) {
  print_slick(std::cout, gen_slick(n, k, seed));
  return 0;
}

int cmd_bench(int k, const std::string& sizes_str, const std::string& c_str, std::uint64_t seed) {
  std::vector<int> sizes;
  std::stringstream ss(sizes_str);
  for (std::string part; std::getline(ss, part, ',');) sizes.push_back(std::stoi(part));
  const Rational c = Rational::parse(c_str);
  DiagOptions opt;
  opt.validate = false;
  std::vector<std::pair<int, std::uint64_t>> rows;
  std::cout << "n\tops\tms\n";
  for (int n : sizes) {
    const SlickExpr e = gen_slick(n, k, seed);
    reset_rational_ops();
    const auto t0 = std::chrono::steady_clock::now();
    const DiagList d = diagonalize(e, c, MatrixSpec::adjacency(), opt);
    const auto t1 = std::chrono::steady_clock::now();
    const std::uint64_t ops = rational_ops();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::cout << n << "\t" << ops << "\t" << ms << "\n";
    if (static_cast<int>(d.size()) != n) throw std::runtime_error("benchmark run emitted wrong count");
    rows.push_back({n, ops});
  }
  for (std::size_t i = 1; i < rows.size(); ++i)
    std::cout << "ratio " << rows[i].first << "/" << rows[i - 1].first << " ops="
              << static_cast<double>(rows[i].second) / static_cast<double>(rows[i - 1].second) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenvalue location for graphs of small slick clique-width"};
  app.require_subcommand(1);

  std::string input, format = "slick", c_str = "0", interval_str, sizes = "10000,20000";
  SpecOptions sopt;
  bool trace = false;
  int n = 1, k = 1, fuzz = 0, max_n = 12, max_k = 4;
  std::uint64_t seed = 0;

  auto* diag = app.add_subcommand("diag", "print diagonal entries of a matrix congruent to M - cI");
  diag->add_option("--input", input)->required();
  diag->add_option("--format", format)->check(CLI::IsMember({"slick", "classic"}));
  diag->add_option("--c", c_str, "rational shift (default 0)");
  add_spec_options(diag, sopt);
  diag->add_flag("--trace", trace, "per-node box trace on stderr");

  auto* count = app.add_subcommand("count", "count eigenvalues in a real interval");
  count->add_option("--input", input)->required();
  count->add_option("--format", format)->check(CLI::IsMember({"slick", "classic"}));
  count->add_option("--interval", interval_str, "e.g. \"(0,1)\", \"[0,0]\", \"(-inf,inf)\"")->required();
  add_spec_options(count, sopt);

  auto* translate = app.add_subcommand("translate", "slick -> classic 2k, or classic -> slick");
  translate->add_option("--input", input)->required();
  translate->add_option("--format", format, "format of the input file")
      ->check(CLI::IsMember({"slick", "classic"}));

  auto* check = app.add_subcommand("check", "compare the engine against the dense oracle");
  check->add_option("--input", input);
  check->add_option("--format", format)->check(CLI::IsMember({"slick", "classic"}));
  check->add_option("--c", c_str);
  add_spec_options(check, sopt);
  check->add_option("--fuzz", fuzz, "run N random cases instead of a single file");
  check->add_option("--max-n", max_n);
  check->add_option("--max-k", max_k);
  check->add_option("--seed", seed);

  auto* gen = app.add_subcommand("gen", "emit a random slick k-expression");
  gen->add_option("--n", n)->required();
  gen->add_option("--k", k)->required();
  gen->add_option("--seed", seed)->required();

  auto* bench = app.add_subcommand("bench", "operation counts and wall time over generated inputs");
  bench->add_option("--k", k)->default_val(3);
  bench->add_option("--sizes", sizes, "comma-separated list of n");
  bench->add_option("--c", c_str);
  bench->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (diag->parsed()) return cmd_diag(input, format, c_str, sopt, trace);
    if (count->parsed()) return cmd_count(input, format, interval_str, sopt);
    if (translate->parsed()) return cmd_translate(input, format);
    if (check->parsed()) {
      if (fuzz <= 0 && input.empty()) {
        std::cerr << "error: check needs --input or --fuzz\n";
        return 1;
      }
      return cmd_check(input, format, c_str, sopt, fuzz, max_n, max_k, seed);
    }
    if (gen->parsed()) return cmd_gen(n, k, seed);
    if (bench->parsed()) return cmd_bench(k, sizes, c_str, seed);
  } catch (const InvariantViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
