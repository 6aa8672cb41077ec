#include "agler/cli.h"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "agler/decompose.h"
#include "agler/json_io.h"
#include "agler/kernels.h"
#include "agler/pick.h"
#include "agler/stability.h"

namespace agler::cli {

namespace {

using io::Json;

// Thrown for input problems found outside the library (exit 2).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when the solver could not finish (exit 3); the result is still written.
struct SolverUnknown {
  Json result;
};

struct Options {
  // shared numerics
  double eps_affine = 1e-9;
  double eps_psd = 1e-9;
  int max_iters = 20000;
  std::string seed = "0x5EED";
  std::string out_path;
  // inputs
  std::string poly_path;
  std::string phi_path;
  std::string pair_path;
  std::string gram_path;
  std::string data_path;
  std::string points_path;
  std::string t1_path;
  std::string t2_path;
  std::string z;
  std::string w;
  std::vector<int> profile;
  std::string slot = "K1";
  // sizes and tolerances
  int n_points = 200;
  int k1 = 1;
  int k2 = 1;
  int n1 = 8;
  int n2 = 8;
  int grid_n = 64;
  int refine_iters = 50;
  int torus_grid = 256;
  int pairs = 100;
  int max_degree = 4;
  int max_n = 64;
  double tol = 1e-10;
  double rank_tol = 1e-9;
  double zero_tol = 1e-10;
};

std::uint64_t ParseSeed(const std::string& s) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used, 0);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("--seed: not an unsigned integer: " + s);
  }
}

Json Unwrap(Json j) {
  if (j.is_object() && j.contains("meta") && j.contains("result")) return j["result"];
  return j;
}

Json ReadJsonFile(const std::string& path, const char* flag) {
  if (path.empty()) throw ValidationError(std::string(flag) + " is required");
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string(flag) + ": cannot open " + path);
  return Unwrap(Json::parse(in));
}

Json ParseInline(const std::string& text, const char* flag) {
  if (text.empty()) throw ValidationError(std::string(flag) + " is required");
  return Json::parse(text);
}

FeasibilityConfig SolverConfig(const Options& o) {
  FeasibilityConfig cfg;
  cfg.eps_affine = o.eps_affine;
  cfg.eps_psd = o.eps_psd;
  cfg.max_iters = o.max_iters;
  cfg.seed = ParseSeed(o.seed);
  return cfg;
}

DegreeProfile ProfileOr(const Options& o, const Poly& p) {
  return o.profile.empty() ? TightProfile(p) : DegreeProfile{o.profile};
}

void AddShared(CLI::App* sub, Options& o) {
  sub->add_option("--eps-affine", o.eps_affine, "affine residual tolerance");
  sub->add_option("--eps-psd", o.eps_psd, "PSD tolerance");
  sub->add_option("--max-iters", o.max_iters, "solver iteration cap");
  sub->add_option("--seed", o.seed, "RNG seed (decimal or 0x hex)");
  sub->add_option("--out", o.out_path, "write the result here instead of stdout");
}

using Handler = std::function<Json(const Options&)>;

struct Command {
  std::string name;
  std::string help;
  std::function<void(CLI::App*, Options&)> flags;
  Handler run;
};

Json Value(Complex c) {
  Json out;
  out["value"] = io::ToJson(c);
  return out;
}

std::vector<Command> BuildCommands() {
  std::vector<Command> cmds;

  cmds.push_back({"reflect", "reflection of a polynomial under a degree profile",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--poly", o.poly_path, "polynomial JSON")->required();
                    s->add_option("--profile", o.profile, "degree profile, e.g. 1,1")
                        ->delimiter(',');
                  },
                  [](const Options& o) {
                    const Poly p = io::PolyFromJson(ReadJsonFile(o.poly_path, "--poly"));
                    return io::ToJson(Reflect(p, ProfileOr(o, p)));
                  }});

  cmds.push_back({"eval", "evaluate a polynomial or rational inner function",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--poly", o.poly_path, "polynomial JSON");
                    s->add_option("--phi", o.phi_path, "rational inner function JSON");
                    s->add_option("--z", o.z, "point as JSON [[re,im],...]")->required();
                  },
                  [](const Options& o) {
                    const Point z = io::PointFromJson(ParseInline(o.z, "--z"));
                    if (!o.phi_path.empty()) {
                      const RationalInner phi = io::PhiFromJson(ReadJsonFile(o.phi_path, "--phi"));
                      if (z.size() != 2) throw ValidationError("--z must have 2 coordinates");
                      return Value(phi(z));
                    }
                    const Poly p = io::PolyFromJson(ReadJsonFile(o.poly_path, "--poly"));
                    if (static_cast<int>(z.size()) != p.nvars()) {
                      throw ValidationError("--z must have one coordinate per variable");
                    }
                    return Value(p(z));
                  }});

  cmds.push_back({"kernel-eval", "evaluate the kernel (1 - phi(z)conj(phi(w))) / Szego",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--phi", o.phi_path, "rational inner function JSON")->required();
                    s->add_option("--z", o.z, "point z")->required();
                    s->add_option("--w", o.w, "point w")->required();
                  },
                  [](const Options& o) {
                    const RationalInner phi = io::PhiFromJson(ReadJsonFile(o.phi_path, "--phi"));
                    const Point z = io::PointFromJson(ParseInline(o.z, "--z"));
                    const Point w = io::PointFromJson(ParseInline(o.w, "--w"));
                    return Value(KphiEval(phi.AsRational(), z, w));
                  }});

  cmds.push_back({"agler-residual", "sampled defect of an Agler decomposition",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--phi", o.phi_path, "rational inner function JSON")->required();
                    s->add_option("--pair", o.pair_path, "Agler pair JSON")->required();
                    s->add_option("--points", o.points_path,
                                  "JSON array of points; every ordered pair is used");
                    s->add_option("--n-points", o.n_points, "random point pairs if --points is absent");
                  },
                  [](const Options& o) {
                    const RationalInner phi = io::PhiFromJson(ReadJsonFile(o.phi_path, "--phi"));
                    const AglerPair pair = io::PairFromJson(ReadJsonFile(o.pair_path, "--pair"));
                    Json out;
                    if (!o.points_path.empty()) {
                      const Json pj = ReadJsonFile(o.points_path, "--points");
                      if (!pj.is_array()) throw ValidationError("--points must hold an array");
                      std::vector<Point> pts;
                      for (const Json& e : pj) pts.push_back(io::PointFromJson(e));
                      out["residual_max"] =
                          AglerResidual(phi.AsRational(), KernelExpr::Gram(pair.k1),
                                        KernelExpr::Gram(pair.k2), pts);
                      out["points_used"] = pts.size();
                      out["mode"] = "all_pairs";
                    } else {
                      if (o.n_points < 1) throw ValidationError("--n-points must be >= 1");
                      out["residual_max"] =
                          IndependentResidual(phi, pair, o.n_points, ParseSeed(o.seed));
                      out["points_used"] = o.n_points;
                      out["mode"] = "random_pairs";
                    }
                    return out;
                  }});

  cmds.push_back({"decompose", "Agler decomposition as PSD Gram matrices",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--phi", o.phi_path, "rational inner function JSON")->required();
                    s->add_option("--n-points", o.n_points, "certificate point pairs");
                  },
                  [](const Options& o) {
                    const RationalInner phi = io::PhiFromJson(ReadJsonFile(o.phi_path, "--phi"));
                    DecomposeConfig cfg;
                    cfg.solver = SolverConfig(o);
                    cfg.certificate_pairs = o.n_points;
                    cfg.certificate_seed = ParseSeed(o.seed);
                    const DecomposeResult r = Decompose(phi, cfg);
                    Json out;
                    out["status"] = ToString(r.status);
                    const Json pair = io::ToJson(r.pair);
                    for (const auto& [k, v] : pair.items()) out[k] = v;
                    if (r.status == DecomposeStatus::kUnknown) throw SolverUnknown{out};
                    return out;
                  }});

  cmds.push_back({"extract-sos", "sum-of-squares factors of a Gram kernel",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--gram", o.gram_path, "Gram kernel or Agler pair JSON")
                        ->required();
                    s->add_option("--slot", o.slot, "K1 or K2 when --gram holds a pair")
                        ->check(CLI::IsMember({"K1", "K2"}));
                    s->add_option("--rank-tol", o.rank_tol, "relative eigenvalue cutoff");
                  },
                  [](const Options& o) {
                    Json gj = ReadJsonFile(o.gram_path, "--gram");
                    if (gj.is_object() && gj.contains("K1")) gj = gj[o.slot];
                    const GramKernel g = io::GramFromJson(gj);
                    const std::vector<Poly> q = ExtractSos(g, o.rank_tol);
                    Json out;
                    out["count"] = q.size();
                    Json polys = Json::array();
                    for (const Poly& p : q) polys.push_back(io::ToJson(p));
                    out["polys"] = std::move(polys);
                    out["denom"] = io::ToJson(g.denom);
                    return out;
                  }});

  cmds.push_back({"unique-check", "decide uniqueness of the Agler decomposition",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--phi", o.phi_path, "rational inner function JSON")->required();
                    s->add_option("--torus-grid", o.torus_grid, "torus scan resolution");
                    s->add_option("--zero-tol", o.zero_tol, "accepted |p| at a refined zero");
                  },
                  [](const Options& o) {
                    const RationalInner phi = io::PhiFromJson(ReadJsonFile(o.phi_path, "--phi"));
                    UniquenessConfig cfg;
                    cfg.torus_grid = o.torus_grid;
                    cfg.zero_tol = o.zero_tol;
                    return io::ToJson(UniquenessTest(phi, cfg));
                  }});

  cmds.push_back({"make-example", "phi = p~/p with p = 3 - z1^k1 - z2^k2 - z1^k1 z2^k2",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--k1", o.k1, "degree in z1")->required();
                    s->add_option("--k2", o.k2, "degree in z2")->required();
                  },
                  [](const Options& o) { return io::ToJson(MakeUniqueExample(o.k1, o.k2)); }});

  cmds.push_back({"support-check", "support of p X_r phi in a truncated series",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--phi", o.phi_path, "rational inner function JSON")->required();
                    s->add_option("--n1", o.n1, "truncation in z1");
                    s->add_option("--n2", o.n2, "truncation in z2");
                    s->add_option("--tol", o.tol, "forbidden-coefficient tolerance");
                  },
                  [](const Options& o) {
                    const RationalInner phi = io::PhiFromJson(ReadJsonFile(o.phi_path, "--phi"));
                    return io::ToJson(SupportCheck(phi, {o.n1, o.n2}, o.tol));
                  }});

  cmds.push_back({"check-stable", "stability certificate on the closed polydisk",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--poly", o.poly_path, "polynomial JSON")->required();
                    s->add_option("--profile", o.profile, "reflection profile")->delimiter(',');
                    s->add_option("--grid-n", o.grid_n, "phase samples per variable");
                    s->add_option("--refine-iters", o.refine_iters, "zero refinement steps");
                    s->add_option("--zero-tol", o.zero_tol, "accepted |p| at a witness");
                  },
                  [](const Options& o) {
                    const Poly p = io::PolyFromJson(ReadJsonFile(o.poly_path, "--poly"));
                    if (o.grid_n < 1) throw ValidationError("--grid-n must be >= 1");
                    StabilityConfig cfg;
                    cfg.grid_n = o.grid_n;
                    cfg.refine_iters = o.refine_iters;
                    cfg.zero_tol = o.zero_tol;
                    cfg.profile = o.profile;
                    return io::ToJson(IsStable(p, cfg));
                  }});

  cmds.push_back({"pick-feasible", "two-variable Pick interpolation feasibility",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--data", o.data_path, "pick data JSON")->required();
                    s->add_option("--max-n", o.max_n, "cap on the number of nodes");
                  },
                  [](const Options& o) {
                    const PickData d = io::PickDataFromJson(ReadJsonFile(o.data_path, "--data"));
                    PickConfig cfg;
                    cfg.solver = SolverConfig(o);
                    cfg.max_n = o.max_n;
                    const PickResult r = PickFeasible(d, cfg);
                    Json out = io::ToJson(r);
                    if (r.status == PickStatus::kUnknown) throw SolverUnknown{out};
                    return out;
                  }});

  cmds.push_back({"pick-one-var", "one-variable Pick matrix test",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--data", o.data_path,
                                  "JSON {\"nodes\": [[re,im],...], \"targets\": [[re,im],...]}")
                        ->required();
                    s->add_option("--tol", o.tol, "eigenvalue tolerance");
                  },
                  [](const Options& o) {
                    const Json j = ReadJsonFile(o.data_path, "--data");
                    if (!j.is_object() || !j.contains("nodes") || !j.contains("targets")) {
                      throw ValidationError("--data needs \"nodes\" and \"targets\"");
                    }
                    const Point nodes = io::PointFromJson(j["nodes"]);
                    const Point targets = io::PointFromJson(j["targets"]);
                    Json out;
                    out["pick"] = PickOneVar(nodes, targets, o.tol);
                    return out;
                  }});

  cmds.push_back({"ando-check", "||p(T1, T2)|| <= 1 for commuting contractions",
                  [](CLI::App* s, Options& o) {
                    s->add_option("--poly", o.poly_path, "polynomial JSON")->required();
                    s->add_option("--t1", o.t1_path, "matrix JSON for T1");
                    s->add_option("--t2", o.t2_path, "matrix JSON for T2");
                    s->add_option("--pairs", o.pairs, "random pairs when --t1/--t2 are absent");
                    s->add_option("--max-degree", o.max_degree, "compressed shift degree cap");
                    s->add_option("--tol", o.tol, "norm tolerance");
                  },
                  [](const Options& o) {
                    const Poly p = io::PolyFromJson(ReadJsonFile(o.poly_path, "--poly"));
                    if (p.nvars() != 2) throw ValidationError("--poly must be bivariate");
                    const double sup = TorusSupNorm(p);
                    if (sup > 1.0 + o.tol) {
                      throw ValidationError("sup |p| on the torus grid is " +
                                            std::to_string(sup) + " > 1");
                    }
                    std::vector<OperatorPair> ops;
                    if (!o.t1_path.empty() || !o.t2_path.empty()) {
                      ops.emplace_back(io::MatrixFromJson(ReadJsonFile(o.t1_path, "--t1")),
                                       io::MatrixFromJson(ReadJsonFile(o.t2_path, "--t2")));
                    } else {
                      ops = RandomCommutingContractions(o.pairs, o.max_degree, ParseSeed(o.seed));
                    }
                    double worst = 0.0;
                    bool ok = true;
                    for (const auto& [t1, t2] : ops) {
                      const AndoResult r = AndoCheck(p, t1, t2, o.tol);
                      worst = std::max(worst, r.norm);
                      ok = ok && r.ok;
                    }
                    Json out;
                    out["ok"] = ok;
                    out["max_norm"] = worst;
                    out["checks"] = ops.size();
                    out["torus_sup"] = sup;
                    return out;
                  }});
  return cmds;
}

Json FlagsOf(const CLI::App* sub) {
  Json flags = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "out") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      std::string joined;
      for (std::size_t i = 0; i < res.size(); ++i) joined += (i ? "," : "") + res[i];
      flags[name] = joined;
    } else {
      flags[name] = opt->get_default_str();
    }
  }
  return flags;
}

void EmitError(std::ostream& err, const std::string& kind, const std::string& message) {
  Json e;
  e["error"]["kind"] = kind;
  e["error"]["message"] = message;
  err << e.dump(2) << '\n';
}

void Emit(const Json& doc, const Options& o, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw ValidationError("--out: cannot write " + o.out_path);
  f << text;
}

}  // namespace

const std::vector<std::string>& Subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const Command& c : BuildCommands()) n.push_back(c.name);
    return n;
  }();
  return names;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::vector<Command> cmds = BuildCommands();
  if (args.empty()) {
    EmitError(err, "usage", "expected a subcommand");
    return kUnknownSubcommand;
  }
  if (args[0] == "--version") {
    out << kVersion << '\n';
    return kOk;
  }
  const bool wants_help = args[0] == "--help" || args[0] == "-h";
  const auto cmd = std::find_if(cmds.begin(), cmds.end(),
                                [&](const Command& c) { return c.name == args[0]; });
  if (cmd == cmds.end() && !wants_help) {
    EmitError(err, "unknown_subcommand", "unknown subcommand: " + args[0]);
    return kUnknownSubcommand;
  }

  CLI::App app{"Agler decompositions of rational inner functions on the bidisk", "agler"};
  app.require_subcommand(1);
  Options opts;
  std::map<std::string, CLI::App*> subs;
  for (const Command& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->option_defaults()->always_capture_default();
    c.flags(sub, opts);
    AddShared(sub, opts);
    subs[c.name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help(wants_help ? "" : args[0]);
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    EmitError(err, "usage", e.what());
    return kValidationError;
  }

  Json doc;
  doc["meta"]["tool"] = "agler";
  doc["meta"]["version"] = kVersion;
  doc["meta"]["command"] = cmd->name;
  doc["meta"]["flags"] = FlagsOf(subs[cmd->name]);
  try {
    doc["result"] = cmd->run(opts);
    Emit(doc, opts, out);
    return kOk;
  } catch (SolverUnknown& u) {
    doc["result"] = std::move(u.result);
    try {
      Emit(doc, opts, out);
    } catch (const std::exception& e) {
      EmitError(err, "validation", e.what());
      return kValidationError;
    }
    EmitError(err, "solver_unknown", "the solver stopped before meeting its tolerances");
    return kSolverUnknown;
  } catch (const nlohmann::json::parse_error& e) {
    EmitError(err, "malformed_json", e.what());
    return kMalformedJson;
  } catch (const nlohmann::json::exception& e) {
    EmitError(err, "validation", e.what());
    return kValidationError;
  } catch (const ConvergenceError& e) {
    EmitError(err, "solver_unknown", e.what());
    return kSolverUnknown;
  } catch (const std::invalid_argument& e) {
    EmitError(err, "validation", e.what());
    return kValidationError;
  } catch (const std::domain_error& e) {
    EmitError(err, "validation", e.what());
    return kValidationError;
  } catch (const std::out_of_range& e) {
    EmitError(err, "validation", e.what());
    return kValidationError;
  } catch (const std::exception& e) {
    EmitError(err, "internal", e.what());
    return kInternalError;
  }
}

}  // namespace agler::cli
