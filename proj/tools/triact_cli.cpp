#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "triact/io.hpp"
#include "triact/scheduler.hpp"
#include "triact/verify.hpp"

using namespace triact;

// Exit codes: 0 pass, 1 a check found a violation, 2 usage or structural
// trouble (unreadable files, corrupt dumps, impossible configurations).

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw G0Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  if (!out.good()) throw G0Error("cannot write " + path);
}

G0Spec resolve_instance(const std::string& inst) {
  if (inst == "s3") return builtin_s3();
  if (inst == "pgl2f8") return builtin_pgl2_f8();
  return parse_g0(read_file(inst));
}

long config_long(const ConfigKV& kv, const std::string& key, long fallback) {
  for (const auto& [k, v] : kv)
    if (k == key) return std::stol(v);
  return fallback;
}

long count_log(const ActionState& st, StageOp op, bool accepted) {
  long n = 0;
  for (const StageEntry& e : st.log)
    n += (e.op == op && e.accepted == accepted);
  return n;
}

void print_incidents(const ActionState& st,
                     const std::vector<Violation>& violations,
                     const std::vector<UnknownCase>& unknowns) {
  const LetterNames names = letter_names(st);
  auto line = [&](const char* tag, int condition, const Triple& c,
                  const Word& w, const std::string& detail) {
    std::cout << "  " << tag << " condition=" << condition;
    if (c.x != kUndefined) {
      std::cout << " triple=(" << point_name(st, c.x);
      if (c.y != kUndefined)
        std::cout << "," << point_name(st, c.y) << "," << point_name(st, c.z);
      std::cout << ")";
    }
    if (!w.empty()) std::cout << " word=" << word_to_string(w, names);
    if (!detail.empty()) std::cout << " — " << detail;
    std::cout << "\n";
  };
  for (const Violation& v : violations)
    line("violation", v.condition, v.triple, v.word, v.detail);
  for (const UnknownCase& u : unknowns)
    line("unknown", u.condition, u.triple, u.word, u.detail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite partial-action construction workbench"};
  app.require_subcommand(1);

  std::string instance = "s3";
  std::string dump_path, out_path, point_name_arg, word_text;
  int steps = 0, word_bound = 4, verify_every = 0, join_free_limit = 12;
  int activate_r = 0, activate_s = 0, activate_u = 0;
  long classify_budget = 200000;
  unsigned shuffle_seed = 0;
  bool strict_unknowns = false, do_verify = false, progress = false;

  CLI::App* vg = app.add_subcommand(
      "verify-g0", "check the seed-group hypotheses of an instance");
  vg->add_option("--instance", instance, "s3, pgl2f8 or a seed file");

  CLI::App* bd = app.add_subcommand(
      "build", "run the construction scheduler and dump the result");
  bd->add_option("--instance", instance, "s3, pgl2f8 or a seed file");
  bd->add_option("--steps", steps, "accepted construction steps")->required();
  bd->add_option("--word-bound", word_bound, "classification length bound");
  bd->add_option("--activate-r", activate_r, "R generators activated up front");
  bd->add_option("--activate-s", activate_s, "S generators activated up front");
  bd->add_option("--activate-u", activate_u, "U generators activated up front");
  bd->add_option("--out", out_path, "dump file to write")->required();
  bd->add_option("--shuffle-seed", shuffle_seed,
                 "nonzero: randomized task order with this seed");
  bd->add_option("--verify-every", verify_every,
                 "goodness-check cadence in accepted steps (0 = never)");
  bd->add_option("--join-free-limit", join_free_limit,
                 "free joins only among the first K point ids");
  bd->add_option("--classify-budget", classify_budget,
                 "node budget for triple classification");
  bd->add_flag("--progress", progress, "one line per accepted step");

  CLI::App* ck = app.add_subcommand(
      "check", "re-run the goodness and equivariance scans on a dump");
  ck->add_option("--dump", dump_path, "dump file")->required();
  ck->add_option("--word-bound", word_bound, "stabilizer length bound")
      ->required();
  ck->add_flag("--strict-unknowns", strict_unknowns,
               "treat unsettled cases as failures");

  CLI::App* stt = app.add_subcommand("stats", "print dump statistics");
  stt->add_option("--dump", dump_path, "dump file")->required();

  CLI::App* ev = app.add_subcommand("eval", "apply a word to a point");
  ev->add_option("--dump", dump_path, "dump file")->required();
  ev->add_option("--point", point_name_arg, "point name")->required();
  ev->add_option("--word", word_text, "whitespace-separated letters")
      ->required();

  CLI::App* rp = app.add_subcommand(
      "replay", "re-execute the dump's log from the initial state");
  rp->add_option("--dump", dump_path, "dump file")->required();
  rp->add_flag("--verify", do_verify,
               "require the rebuilt dump to match byte-for-byte");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(vg)) {
      const G0Spec g0 = resolve_instance(instance);
      const HypothesisReport rep = check_hypotheses(g0);
      std::cout << rep.summary();
      return rep.all_pass() ? 0 : 1;
    }

    if (app.got_subcommand(bd)) {
      BuildConfig cfg;
      cfg.g0 = resolve_instance(instance);
      cfg.steps = steps;
      cfg.word_bound = word_bound;
      cfg.activate_r = activate_r;
      cfg.activate_s = activate_s;
      cfg.activate_u = activate_u;
      cfg.verify_every = verify_every;
      cfg.join_free_limit = join_free_limit;
      cfg.classify_budget = classify_budget;
      cfg.shuffle_seed = shuffle_seed;
      cfg.progress = progress;
      const ActionState st = build(cfg);
      const ConfigKV kv = {
          {"activate_r", std::to_string(activate_r)},
          {"activate_s", std::to_string(activate_s)},
          {"activate_u", std::to_string(activate_u)},
          {"classify_budget", std::to_string(classify_budget)},
          {"instance", instance},
          {"join_free_limit", std::to_string(join_free_limit)},
          {"shuffle_seed", std::to_string(shuffle_seed)},
          {"steps", std::to_string(steps)},
          {"verify_every", std::to_string(verify_every)},
          {"word_bound", std::to_string(word_bound)},
      };
      write_file(out_path, dump_state(st, kv));
      std::cout << "built " << out_path << ": " << st.n_points() << " points, "
                << st.genmaps.size() << " generators, " << st.log.size()
                << " log entries\n";
      return 0;
    }

    const LoadedDump ld = load_dump(read_file(dump_path));
    const ActionState& st = ld.state;

    if (app.got_subcommand(ck)) {
      const EquivarianceReport eq = check_equivariance(st);
      std::cout << "equivariance violations=" << eq.violations.size() << "\n";
      print_incidents(st, eq.violations, {});
      const GoodnessReport good = check_good(st, word_bound);
      std::cout << good.summary() << "\n";
      print_incidents(st, good.violations, good.unknowns);
      if (!eq.ok() || !good.ok()) return 1;
      if (strict_unknowns && !good.unknowns.empty()) return 1;
      return 0;
    }

    if (app.got_subcommand(stt)) {
      long per_cls[3] = {0, 0, 0};
      for (const GenMap& m : st.genmaps)
        ++per_cls[static_cast<int>(m.cls) - 1];
      std::cout << "points " << st.n_points() << " (base " << st.n_base
                << ", blocks " << st.block_step.size() << ")\n";
      std::cout << "generators " << st.genmaps.size() << " (r " << per_cls[0]
                << ", s " << per_cls[1] << ", u " << per_cls[2] << ")\n";
      std::cout << "log " << st.log.size() << " entries: "
                << count_log(st, StageOp::Activate, true) << " activate, "
                << count_log(st, StageOp::Extend, true) << " extend, "
                << count_log(st, StageOp::Join, true) << " join, "
                << count_log(st, StageOp::Activate, false) +
                       count_log(st, StageOp::Extend, false) +
                       count_log(st, StageOp::Join, false)
                << " rejected\n";
      const int depth =
          static_cast<int>(config_long(ld.config, "word_bound", 4));
      const CoverageReport cov = coverage(st, depth);
      std::cout << "coverage (bound " << depth << "): " << cov.reached_sets
                << " reached sets, join sets " << cov.join_sets_reached << "/"
                << cov.join_sets_total << ", generator pairs "
                << cov.pairs_defined << "/" << cov.pairs_total << "\n";
      return 0;
    }

    if (app.got_subcommand(ev)) {
      const PointId p = point_by_name(st, point_name_arg);
      const LetterNames names = letter_names(st);
      const Word w = reduce(parse_word(word_text, names), st.g0);
      std::cout << "canonical: "
                << (w.empty() ? "(identity)" : word_to_string(w, names))
                << "\n";
      const WordEval r = apply_word(st, p, w);
      if (r.result)
        std::cout << point_name_arg << " -> " << point_name(st, *r.result)
                  << "\n";
      else
        std::cout << point_name_arg << " -> undefined (first "
                  << r.defined_prefix << " letters act)\n";
      return 0;
    }

    if (app.got_subcommand(rp)) {
      const int wb = static_cast<int>(config_long(ld.config, "word_bound", 4));
      const long cb = config_long(ld.config, "classify_budget", 200000);
      try {
        const ActionState rebuilt = replay_log(st.g0, st.log, wb, cb);
        if (do_verify) {
          const std::string again = dump_state(rebuilt, ld.config);
          if (again != read_file(dump_path)) {
            std::cout << "replay DIVERGED: rebuilt dump differs from the file\n";
            return 1;
          }
          std::cout << "replay ok: " << st.log.size()
                    << " steps, dump matches byte-for-byte\n";
        } else {
          std::cout << "replay ok: " << st.log.size() << " steps\n";
        }
        return 0;
      } catch (const G0Error& e) {
        std::cout << "replay FAILED: " << e.what() << "\n";
        return 1;
      }
    }
  } catch (const G0Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
