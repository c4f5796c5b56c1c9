// ncreal: command-line front end for the nc realization engine.

#include <ncreal/ncreal.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

using namespace ncreal;

namespace {

constexpr std::uint64_t kDefaultSeed = 20200728;

enum Exit { kOk = 0, kPropertyFailure = 1, kDomain = 2, kInput = 3 };

struct Common {
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  std::size_t trials = 50;
  long bound = 3;
  std::vector<std::size_t> levels{1, 2, 3};
  std::size_t jobs = 1;
  std::string format = "text";
};

bool is_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& row : j) {
    if (!row.is_array()) return false;
    for (const auto& x : row)
      if (!x.is_string()) return false;
  }
  return true;
}

void render_text(std::ostream& os, const Json& j, const std::string& indent) {
  for (const auto& [key, value] : j.items()) {
    if (is_matrix(value)) {
      os << indent << key << ":\n";
      for (const auto& row : value) {
        os << indent << "  ";
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i].get<std::string>();
        os << "\n";
      }
    } else if (value.is_object()) {
      os << indent << key << ":\n";
      render_text(os, value, indent + "  ");
    } else if (value.is_array() && !value.empty() && (value[0].is_object() || is_matrix(value[0]))) {
      os << indent << key << ":\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        Json item;
        item["[" + std::to_string(i) + "]"] = value[i];
        render_text(os, item, indent + "  ");
      }
    } else if (value.is_string()) {
      os << indent << key << ": " << value.get<std::string>() << "\n";
    } else {
      os << indent << key << ": " << value.dump() << "\n";
    }
  }
}

void emit(const Common& c, const Json& report) {
  if (c.format == "json") std::cout << report.dump(2) << "\n";
  else render_text(std::cout, report, "");
}

Json seeded(const Common& c, Json report) {
  Json out;
  out["seed"] = c.seed;
  for (const auto& [k, v] : report.items()) out[k] = v;
  return out;
}

FMRealization load_realization(const std::string& path) { return realization_from_json(read_json_file(path)); }
MatTuple load_tuple(const std::string& path) { return tuple_from_json(read_json_file(path)); }

/// Either a realization file or an expression compiled at a centre.
struct RealizationSource {
  std::string file, expr, centre;
  bool no_minimize = false;

  bool has_expr() const { return !expr.empty(); }

  FMRealization get() const {
    if (!file.empty()) return load_realization(file);
    if (expr.empty() || centre.empty()) throw InputError("need a realization file, or --expr with --centre");
    SynthesisOptions opt;
    opt.minimize = opt.minimize_intermediate = !no_minimize;
    return realize_expr(parse_expr(expr), load_tuple(centre), opt);
  }
};

Json lla_json(const LlaReport& rep) {
  Json j;
  j["pass"] = rep.pass;
  j["minimal"] = rep.minimal;
  if (!rep.minimal && !rep.pass)
    j["note"] = "realization is not minimal: a failure does not show the series is not a nc function";
  Json vs = Json::array();
  for (const auto& v : rep.violations) {
    Json o;
    o["equation"] = std::string(1, v.equation);
    if (!v.units.empty()) o["units"] = v.units;
    else o["trial"] = v.trial;
    std::vector<std::size_t> vars;
    for (auto i : v.vars) vars.push_back(i + 1);
    o["vars"] = vars;
    o["residual"] = to_json(v.residual);
    vs.push_back(std::move(o));
  }
  j["violations"] = std::move(vs);
  return j;
}

std::vector<Mat> load_mats(const std::string& path) {
  Json j = read_json_file(path);
  if (!j.is_array()) throw InputError(path + ": expected an array of matrices");
  std::vector<Mat> out;
  for (const auto& m : j) out.push_back(mat_from_json(m));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Exact calculus of noncommutative rational functions via Fornasini-Marchesini realizations"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--seed", c.seed, "random seed (default: $NCREAL_SEED or built-in)")->each([&](const std::string&) {
    c.seed_given = true;
  });
  app.add_option("--trials", c.trials, "random trials per check")->capture_default_str();
  app.add_option("--bound", c.bound, "entries of random matrices lie in [-B, B]")->capture_default_str();
  app.add_option("--levels", c.levels, "matrix levels for sampling")->delimiter(',')->capture_default_str();
  app.add_option("--jobs", c.jobs, "parallel workers for independent trials")->capture_default_str();
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  auto add_source = [](CLI::App* sub, RealizationSource& src, bool positional = true) {
    if (positional) sub->add_option("realization", src.file, "realization JSON file");
    sub->add_option("--expr", src.expr, "nc rational expression");
    sub->add_option("--centre", src.centre, "centre JSON (array of s x s matrices)");
    sub->add_flag("--no-minimize", src.no_minimize, "skip minimization when compiling --expr");
  };

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate an expression or realization at a point");
  RealizationSource eval_src;
  std::string eval_point;
  eval->add_option("realization", eval_src.file, "realization JSON file");
  eval->add_option("--expr", eval_src.expr, "nc rational expression");
  eval->add_option("--point", eval_point, "point JSON (array of n x n matrices)")->required();

  // realize
  auto* realize = app.add_subcommand("realize", "compile an expression into a realization centred at Y");
  RealizationSource realize_src;
  realize->add_option("--expr", realize_src.expr, "nc rational expression")->required();
  realize->add_option("--centre", realize_src.centre, "centre JSON")->required();
  realize->add_flag("--no-minimize", realize_src.no_minimize, "keep the unreduced composition");

  // minimize
  auto* minim = app.add_subcommand("minimize", "reduce a realization to a minimal one");
  std::string minim_file;
  minim->add_option("realization", minim_file, "realization JSON file")->required();

  // similar
  auto* similar = app.add_subcommand("similar", "find the similarity between two minimal realizations");
  std::string sim1, sim2;
  similar->add_option("first", sim1, "realization JSON file")->required();
  similar->add_option("second", sim2, "realization JSON file")->required();

  // check-lla
  auto* check = app.add_subcommand("check-lla", "check the linearized lost-abbey conditions");
  RealizationSource check_src;
  add_source(check, check_src);
  std::size_t ext_n = 0, ext_m = 0;
  check->add_option("--extended", ext_n, "also run the randomized sn x sm check with this n");
  check->add_option("--extended-m", ext_m, "m for --extended (default n)");

  // domain
  auto* domain = app.add_subcommand("domain", "test membership of a point in the domain");
  RealizationSource domain_src;
  std::string domain_point;
  add_source(domain, domain_src);
  domain->add_option("--point", domain_point, "point JSON")->required();

  // taylor
  auto* taylor = app.add_subcommand("taylor", "Taylor-Taylor coefficient of a word");
  RealizationSource taylor_src;
  std::string taylor_word, taylor_dirs, taylor_point;
  add_source(taylor, taylor_src);
  taylor->add_option("--word", taylor_word, "word such as g1g2 (e for the empty word)")->required();
  taylor->add_option("--dirs", taylor_dirs, "JSON array of |w| matrices s x s; default: all matrix units");
  taylor->add_option("--point", taylor_point, "also sum the series at this jointly nilpotent point");

  // derive
  auto* derive = app.add_subcommand("derive", "higher-order difference-differential operator");
  RealizationSource derive_src;
  std::string derive_word, derive_points, derive_dirs;
  add_source(derive, derive_src);
  derive->add_option("--word", derive_word, "word g_{j1}...g_{jk}")->required();
  derive->add_option("--point", derive_points,
                     "JSON: one point X (centre fills the rest), or an array of |w|+1 points")
      ->required();
  derive->add_option("--dirs", derive_dirs, "JSON array of |w| direction matrices")->required();

  // equiv
  auto* equiv = app.add_subcommand("equiv", "sample two expressions for evaluation equivalence");
  std::string eq1, eq2;
  equiv->add_option("first", eq1, "expression")->required();
  equiv->add_option("second", eq2, "expression")->required();

  // harness
  auto* harness = app.add_subcommand("harness", "sample the nc-function properties of a realization");
  RealizationSource harness_src;
  add_source(harness, harness_src);

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }
  if (!c.seed_given) {
    if (const char* env = std::getenv("NCREAL_SEED")) {
      try {
        c.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw InputError("NCREAL_SEED is not an integer");
      }
    }
  }
  Rng rng(c.seed);

  if (*eval) {
    MatTuple x = load_tuple(eval_point);
    Json rep;
    if (eval_src.has_expr()) {
      rep["value"] = to_json(eval_expr(parse_expr(eval_src.expr), x));
    } else {
      FMRealization r = eval_src.get();
      rep["value"] = to_json(x.level() % r.s == 0 ? eval_realization(r, x) : eval_at_level_n(r, x));
    }
    emit(c, rep);
    return kOk;
  }
  if (*realize) {
    std::cout << to_json(realize_src.get()).dump(2) << "\n";
    return kOk;
  }
  if (*minim) {
    std::cout << to_json(minimize(load_realization(minim_file))).dump(2) << "\n";
    return kOk;
  }
  if (*similar) {
    FMRealization r1 = load_realization(sim1), r2 = load_realization(sim2);
    Json rep;
    auto t = find_similarity(r1, r2);
    rep["similar"] = t.has_value();
    if (t) rep["T"] = to_json(*t);
    emit(c, rep);
    return t ? kOk : kPropertyFailure;
  }
  if (*check) {
    FMRealization r = check_src.get();
    LlaReport rep = lla_check(r);
    Json j = lla_json(rep);
    bool pass = rep.pass;
    if (ext_n) {
      LlaReport ext = lla_check_extended(r, ext_n, ext_m ? ext_m : ext_n, c.trials, rng, c.bound);
      j["extended"] = lla_json(ext);
      pass = pass && ext.pass;
      j = seeded(c, j);
    }
    emit(c, j);
    return pass ? kOk : kPropertyFailure;
  }
  if (*domain) {
    MatTuple x = load_tuple(domain_point);
    Json rep;
    if (domain_src.has_expr() && domain_src.centre.empty()) {
      rep["in-domain"] = in_expr_domain(parse_expr(domain_src.expr), x);
    } else {
      FMRealization r = domain_src.get();
      if (x.level() % r.s == 0) {
        rep["in-domain"] = in_domain(r, x);
      } else {
        rep["in-domain"] = in_domain(r, ampliate(r.s, x));
        rep["note"] = "level not divisible by s: tested I_s (x) X";
      }
    }
    emit(c, rep);
    return kOk;
  }
  if (*taylor) {
    FMRealization r = taylor_src.get();
    Word w = Word::parse(taylor_word);
    if (w.max_letter() > r.d) throw InputError("word uses a letter beyond d = " + std::to_string(r.d));
    Json rep;
    rep["word"] = w.str();
    if (!taylor_dirs.empty()) {
      rep["coefficient"] = to_json(tt_coefficient(r, w, load_mats(taylor_dirs)));
    } else {
      // Values on all tuples of matrix units, in lexicographic unit order.
      Json table = Json::array();
      const std::size_t units = r.s * r.s;
      std::vector<std::size_t> idx(w.size(), 0);
      for (;;) {
        std::vector<Mat> z;
        std::vector<std::string> names;
        for (auto u : idx) {
          z.push_back(Mat::unit(r.s, r.s, u / r.s, u % r.s));
          names.push_back("E" + std::to_string(u / r.s + 1) + std::to_string(u % r.s + 1));
        }
        Json e;
        e["units"] = names;
        e["value"] = to_json(tt_coefficient(r, w, z));
        table.push_back(std::move(e));
        std::size_t i = idx.size();
        while (i > 0 && ++idx[i - 1] == units) idx[--i] = 0;
        if (i == 0) break;
      }
      rep["coefficients"] = std::move(table);
    }
    if (!taylor_point.empty()) rep["series"] = to_json(tt_series_eval(r, load_tuple(taylor_point)));
    emit(c, rep);
    return kOk;
  }
  if (*derive) {
    Word w = Word::parse(derive_word);
    std::vector<Mat> dirs = load_mats(derive_dirs);
    Json pj = read_json_file(derive_points);
    // A point nests three arrays deep, a list of points four.
    const bool single = !(pj.is_array() && !pj.empty() && pj[0].is_array() && !pj[0].empty() &&
                          pj[0][0].is_array() && !pj[0][0].empty() && pj[0][0][0].is_array());
    Json rep;
    rep["word"] = w.str();
    if (derive_src.has_expr() && derive_src.centre.empty()) {
      if (single) throw InputError("with --expr alone, --point must list |w|+1 points");
      std::vector<MatTuple> pts;
      for (const auto& p : pj) pts.push_back(tuple_from_json(p));
      NcExpr e = parse_expr(derive_src.expr);
      rep["value"] = to_json(delta_block([&](const MatTuple& x) { return eval_expr(e, x); }, w, pts, dirs));
      emit(c, rep);
      return kOk;
    }
    FMRealization r = derive_src.get();
    const Evaluator f = [&](const MatTuple& x) { return eval_realization(r, x); };
    if (single) {
      MatTuple x = tuple_from_json(pj);
      std::vector<MatTuple> pts{x};
      for (std::size_t t = 0; t < w.size(); ++t) pts.push_back(ampliate(x.level() / r.s, r.centre()));
      Mat block = delta_block(f, w, pts, dirs);
      rep["value"] = to_json(block);
      LlaReport lla = lla_check(r);
      if (lla.pass) {
        bool agree = block == delta_closed_form(r, w, x, dirs, false);
        rep["closed-form-agrees"] = agree;
        emit(c, rep);
        return agree ? kOk : kPropertyFailure;
      }
      rep["note"] = "closed form not applicable: realization fails lla_check";
    } else {
      std::vector<MatTuple> pts;
      for (const auto& p : pj) pts.push_back(tuple_from_json(p));
      rep["value"] = to_json(delta_block(f, w, pts, dirs));
    }
    emit(c, rep);
    return kOk;
  }
  if (*equiv) {
    NcExpr e1 = parse_expr(eq1), e2 = parse_expr(eq2);
    auto v = equivalence_check(e1, e2, c.trials, c.levels, rng, c.bound);
    Json rep;
    rep["verdict"] = v.equivalent_up_to_sampling ? "equivalent up to sampling" : "counterexample found";
    rep["compared"] = v.compared;
    if (v.counterexample) {
      rep["point"] = to_json(*v.counterexample);
      rep["first"] = to_json(*v.value1);
      rep["second"] = to_json(*v.value2);
    }
    emit(c, seeded(c, rep));
    return v.equivalent_up_to_sampling ? kOk : kPropertyFailure;
  }
  if (*harness) {
    FMRealization r = harness_src.get();
    HarnessReport h = nc_property_harness(r, c.trials, rng, c.bound);
    Json rep;
    rep["pass"] = h.pass;
    Json checked;
    for (const auto& [k, n] : h.checked) checked[k] = n;
    rep["checked"] = checked;
    rep["failures"] = h.failures;
    rep["notes"] = h.notes;
    emit(c, seeded(c, rep));
    return h.pass ? kOk : kPropertyFailure;
  }
  if (*selftest) {
    auto results = run_selftest(c.seed, c.jobs);
    bool all = true;
    Json rep;
    rep["seed"] = c.seed;
    Json list = Json::array();
    for (const auto& r : results) {
      all = all && r.pass;
      if (c.format == "text") {
        std::cout << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  [" << r.detail
                  << "]\n";
      }
      Json o;
      o["id"] = r.id;
      o["name"] = r.name;
      o["pass"] = r.pass;
      o["samples"] = r.samples;
      o["detail"] = r.detail;
      list.push_back(std::move(o));
    }
    rep["criteria"] = std::move(list);
    if (c.format == "json") std::cout << rep.dump(2) << "\n";
    else std::cout << "seed: " << c.seed << "\n";
    return all ? kOk : kPropertyFailure;
  }
  return kInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const OutOfDomain& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const NotNilpotent& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const ShapeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const ScalarStructureViolation& e) {
    std::cerr << "property failure: " << e.what() << "\n";
    return kPropertyFailure;
  } catch (const PreconditionFailure& e) {
    std::cerr << "property failure: " << e.what() << "\n";
    return kPropertyFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPropertyFailure;
  }
}
