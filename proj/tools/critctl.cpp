// critctl: command line front end. Prints JSON; exit 0 = pass, 1 = assertion failure, 2 = input error.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "crit/harness.hpp"
#include "crit/io.hpp"

using namespace crit;
using nlohmann::json;

namespace {

struct Common {
  std::string format;
  std::uint64_t seed = 0;
  double tol_rank = Tolerances{}.rank;
  double tol_member = Tolerances{}.member;
  std::string out;
  int threads = 1;
  int restarts = 20;
};

void add_common(CLI::App* cmd, Common& c, bool with_format) {
  if (with_format) cmd->add_option("--format", c.format, "tensor format, e.g. 2x2x2 or S3(2)");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--tol-rank", c.tol_rank, "relative rank tolerance");
  cmd->add_option("--tol-member", c.tol_member, "membership tolerance");
  cmd->add_option("--out", c.out, "write JSON here instead of stdout");
  cmd->add_option("--threads", c.threads, "path tracking threads")->check(CLI::PositiveNumber);
  cmd->add_option("--restarts", c.restarts, "ALS restarts")->check(CLI::PositiveNumber);
}

Tolerances tolerances(const Common& c) {
  Tolerances t;
  t.rank = c.tol_rank;
  t.member = c.tol_member;
  return t;
}

VerifyOptions verify_options(const Common& c) {
  VerifyOptions o;
  o.seed = c.seed;
  o.tol = tolerances(c);
  o.threads = c.threads;
  o.restarts = c.restarts;
  return o;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw InputError("cannot write " + out);
  f << j.dump(2) << "\n";
}

// --f file, or a random tensor from --format/--seed.
Tensor input_tensor(const std::string& file, const Common& c, bool real_only) {
  if (!file.empty()) return read_tensor_file(file);
  if (c.format.empty()) throw InputError("need --f <file> or --format");
  return random_tensor(parse_format(c.format), c.seed, real_only);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critical rank-one tensors, critical spaces and their counts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common c;
  std::string f_file, g_file;
  int ell = 1, k = 1, n = 0, q = 0, r = 0, bk = 0, sweeps = 10000;
  bool complex_entries = false;

  auto* verify = app.add_subcommand("verify", "run every check on a random real tensor");
  add_common(verify, c, true);
  verify->get_option("--format")->required();

  auto* experiment = app.add_subcommand("experiment-2x2x4", "the 2x2x4 experiment");
  add_common(experiment, c, false);

  auto* count = app.add_subcommand("count", "number of critical rank-one tensors of a general tensor");
  count->add_option("--format", c.format)->required();
  count->add_option("--out", c.out);

  auto* bott = app.add_subcommand("bott", "h^q(P^n, Omega^r(k))");
  bott->add_option("--n", n)->required()->check(CLI::NonNegativeNumber);
  bott->add_option("--q", q)->required()->check(CLI::NonNegativeNumber);
  bott->add_option("--r", r)->required()->check(CLI::NonNegativeNumber);
  bott->add_option("--k", bk)->required();
  bott->add_option("--out", c.out);

  auto* pair = app.add_subcommand("pair", "the pairing [f|g]_ell as an antisymmetric matrix");
  pair->add_option("--f", f_file)->required();
  pair->add_option("--g", g_file)->required();
  pair->add_option("--ell", ell, "factor, 1-based")->check(CLI::PositiveNumber);
  pair->add_option("--out", c.out);

  auto* critspace = app.add_subcommand("critspace", "the critical space H_f");
  add_common(critspace, c, true);
  critspace->add_option("--f", f_file, "tensor file (default: random from --format/--seed)");
  critspace->add_flag("--complex", complex_entries, "random complex entries");

  auto* solve = app.add_subcommand("solve", "all critical rank-one tensors by homotopy continuation");
  add_common(solve, c, true);
  solve->add_option("--f", f_file);
  solve->add_flag("--complex", complex_entries);

  auto* approx = app.add_subcommand("approx", "a real critical rank-at-most-k tensor by ALS");
  add_common(approx, c, true);
  approx->add_option("--f", f_file);
  approx->add_option("--k", k)->check(CLI::NonNegativeNumber);

  auto* demo = app.add_subcommand("demo-wtensor", "rank-2 ALS on the W tensor");
  demo->add_option("--seed", c.seed);
  demo->add_option("--sweeps", sweeps)->check(CLI::PositiveNumber);
  demo->add_option("--out", c.out);

  auto* random = app.add_subcommand("random", "write a random tensor file");
  random->add_option("--format", c.format)->required();
  random->add_option("--seed", c.seed);
  random->add_flag("--complex", complex_entries);
  random->add_option("--out", c.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      const Report rep = cmd_verify(parse_format(c.format), verify_options(c));
      emit(rep.to_json(), c.out);
      return rep.passed() ? 0 : 1;
    }
    if (*experiment) {
      const Report rep = cmd_experiment_2x2x4(verify_options(c));
      emit(rep.to_json(), c.out);
      return rep.passed() ? 0 : 1;
    }
    if (*demo) {
      const Report rep = cmd_demo_wtensor(c.seed, sweeps);
      emit(rep.to_json(), c.out);
      return rep.passed() ? 0 : 1;
    }
    if (*count) {
      emit(count_json(parse_format(c.format)), c.out);
    } else if (*bott) {
      emit(bott_json(n, q, r, bk), c.out);
    } else if (*pair) {
      const Tensor f = read_tensor_file(f_file);
      const Tensor g = read_tensor_file(g_file);
      if (ell > f.format().factors()) throw InputError("--ell out of range");
      emit(pair_json(f, g, ell - 1), c.out);
    } else if (*critspace) {
      emit(critspace_json(input_tensor(f_file, c, !complex_entries), tolerances(c)), c.out);
    } else if (*solve) {
      TrackerConfig cfg;
      cfg.seed = c.seed;
      cfg.threads = c.threads;
      emit(solve_json(input_tensor(f_file, c, !complex_entries), cfg), c.out);
    } else if (*approx) {
      AlsConfig cfg;
      cfg.seed = c.seed;
      cfg.restarts = c.restarts;
      emit(approx_json(input_tensor(f_file, c, true), k, cfg), c.out);
    } else if (*random) {
      const Tensor t = random_tensor(parse_format(c.format), c.seed, !complex_entries);
      if (c.out.empty())
        std::cout << write_tensor(t);
      else
        write_tensor_file(t, c.out);
    }
    return 0;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
