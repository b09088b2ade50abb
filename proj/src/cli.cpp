#include "holant/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <random>

#include "holant/holo.hpp"
#include "holant/hom.hpp"
#include "holant/io.hpp"
#include "holant/polynomial.hpp"
#include "holant/simsim.hpp"
#include "holant/span.hpp"

namespace holant {

using io::Json;

namespace {

class UsageError : public HolantError {
 public:
  using HolantError::HolantError;
};

struct Outcome {
  Json report;
  int code = kExitPass;
};

Json report_with(const std::string& verdict) {
  Json j;
  j["verdict"] = verdict;
  return j;
}

// Reads a file and prefixes structural errors with its path.
template <class F>
auto load(const std::string& path, F&& f) {
  const Json j = io::read_json_file(path);
  try {
    return f(j);
  } catch (const io::FormatError& e) {
    throw io::FormatError(path + ": " + e.what());
  }
}

SignatureSet load_set(const std::string& path) {
  return load(path, [](const Json& j) { return io::signature_set_from_json(j).set; });
}

Complex parse_complex(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + " expects RE or RE,IM, got \"" + text + "\"");
  }
}

Shape parse_profile(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t used = 0;
    const int l = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("trailing");
    const std::string rest = text.substr(comma + 1);
    const int r = std::stoi(rest, &used);
    if (used != rest.size() || l < 0 || r < 0) throw std::invalid_argument("bad");
    return {l, r};
  } catch (const std::exception&) {
    throw UsageError("--profile expects L,R with non-negative integers, got \"" + text + "\"");
  }
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Generators print as A, B, ... like the closure's default names.
std::vector<std::string> generator_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n && i < 26; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
  return names;
}

Json word_json(const Word& w, std::size_t gens) {
  Json j;
  j["word"] = word_string(w, generator_names(gens));
  j["generators"] = w;
  return j;
}

Matrix eval_word(const std::vector<Matrix>& ms, const Word& w, int q) {
  Matrix p = Matrix::Identity(q, q);
  for (int k : w) p = p * ms[static_cast<std::size_t>(k)];
  return p;
}

// ---- commands ----

struct EvalArgs {
  std::string grid, sigs, method = "contract";
  double tol = 0;
  std::size_t max_intermediate = kMaxTensorEntries;
};

Outcome run_eval(const EvalArgs& a) {
  const auto sigs = load_set(a.sigs);
  const auto method = a.method == "brute" ? EvalMethod::brute : EvalMethod::contract;
  const Json doc = io::read_json_file(a.grid);
  Outcome o{report_with("ok")};
  o.report["method"] = a.method;
  if (doc.is_object() && doc.contains("terms")) {
    const auto k = load(a.grid, [&](const Json& j) { return io::gadget_from_json(j, &sigs); });
    o.report["signature"] = io::signature_to_json(gadget_signature(k, sigs, method));
    return o;
  }
  const auto g = load(a.grid, [&](const Json& j) { return io::grid_from_json(j, &sigs); });
  if (!g.closed()) {
    o.report["signature"] = io::signature_to_json(gadget_signature(g, sigs, method));
    return o;
  }
  ContractOptions copts;
  copts.max_intermediate = a.max_intermediate;
  const Complex v = method == EvalMethod::brute ? holant_eval(g, sigs) : holant_eval_contracted(g, sigs, copts);
  o.report["value"] = io::complex_to_json(v);
  o.report["zero"] = std::abs(v) <= a.tol;
  return o;
}

Outcome run_poly(const std::string& path) {
  const auto g = load(path, [](const Json& j) { return io::grid_from_json(j); });
  const auto p = holant_polynomial(g);
  Outcome o{report_with("ok")};
  o.report["polynomial"] = p.to_string();
  Json terms = Json::array();
  for (const auto& [mono, c] : p.terms()) {
    Json t;
    Json vars = Json::array();
    for (const auto& v : mono) {
      Json vj;
      vj["sig"] = v.sig;
      vj["index"] = v.index;
      vars.push_back(std::move(vj));
    }
    t["monomial"] = std::move(vars);
    t["coefficient"] = io::complex_to_json(c);
    terms.push_back(std::move(t));
  }
  o.report["terms"] = std::move(terms);
  return o;
}

SimpleGraph load_graph(const std::string& path) {
  return load(path, [](const Json& j) { return io::graph_from_json(j); });
}

Outcome run_hom(const std::string& x, const std::string& g, const std::string& method) {
  const auto gx = load_graph(x);
  const auto gg = load_graph(g);
  Outcome o{report_with("ok")};
  o.report["method"] = method;
  o.report["count"] = hom_count(gx, gg, method == "brute" ? HomMethod::brute : HomMethod::holant);
  return o;
}

Outcome run_homdist(const std::string& f, const std::string& g, int degree, int vertices, const std::string& witness) {
  const auto r = bounded_degree_distinguisher(load_graph(f), load_graph(g), degree, vertices);
  Outcome o{report_with(r.indistinguishable ? "indistinguishable_at_bound" : "distinguished")};
  o.code = r.indistinguishable ? kExitPass : kExitFail;
  o.report["max_degree"] = degree;
  o.report["max_vertices"] = vertices;
  o.report["graphs_checked"] = r.graphs_checked;
  o.report["bound_relative"] = true;
  if (r.distinguisher) {
    Json d;
    d["graph"] = io::graph_to_json(r.distinguisher->x);
    d["count_f"] = r.distinguisher->count_f;
    d["count_g"] = r.distinguisher->count_g;
    o.report["distinguisher"] = std::move(d);
    if (!witness.empty()) io::write_json_file(witness, io::graph_to_json(r.distinguisher->x));
  }
  return o;
}

double max_entry_gap(const MixedTensor& a, const MixedTensor& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Outcome run_transform(const std::string& sigs_path, const std::string& matrix_path, bool inverse_check, double tol) {
  const auto fs = load_set(sigs_path);
  const auto m = load(matrix_path, [](const Json& j) { return io::matrix_from_json(j); });
  if (fs.q() && *fs.q() != m.rows()) {
    throw io::FormatError(matrix_path + ": matrix dimension " + std::to_string(m.rows()) +
                          " differs from the signature domain size " + std::to_string(*fs.q()));
  }
  const HoloTransform t(m);
  const auto out = act_set(t, fs);
  Outcome o{report_with("ok")};
  o.report["condition"] = t.condition();
  o.report["warnings"] = t.warnings();
  o.report["orthogonal_preserver"] = is_orthogonal_preserver(t);
  o.report["permutation_preserver"] = is_permutation_preserver(t);
  if (inverse_check) {
    const auto back = act_set(HoloTransform(t.inverse()), out);
    double gap = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) gap = std::max(gap, max_entry_gap(back[i].tensor, fs[i].tensor));
    const double scale = std::max(1.0, t.condition());
    Json c;
    c["max_abs_error"] = gap;
    c["tolerance"] = tol * scale;
    c["passed"] = gap <= tol * scale;
    o.report["inverse_check"] = c;
    if (gap > tol * scale) {
      o.report["verdict"] = "inverse_check_failed";
      o.code = kExitFail;
    }
  }
  o.report["signatures"] = io::signature_set_to_json(out);
  return o;
}

Outcome run_counterexample(const std::string& a, const std::string& b, double eps) {
  const auto r = epsilon_family_counterexample(parse_complex(a, "--a"), parse_complex(b, "--b"), eps);
  Outcome o{report_with("ok")};
  o.report["eps"] = r.eps;
  o.report["a"] = io::complex_to_json(r.a);
  o.report["b"] = io::complex_to_json(r.b);
  Json fv = Json::array();
  for (const auto& z : r.fvector) fv.push_back(io::complex_to_json(z));
  o.report["fvector"] = std::move(fv);
  o.report["distance"] = r.distance;
  o.report["predicted_distance"] = r.predicted_distance;
  o.report["disequality_fixed"] = r.disequality_fixed;
  o.report["transform"] = io::matrix_to_json(r.transform.matrix());
  o.report["signatures"] = io::signature_set_to_json(r.transformed);
  return o;
}

struct PairArgs {
  std::string f, g, bijection, witness;
  int max_vertices = 0;
};

Bijection load_bijection(const PairArgs& a, const SignatureSet& fs, const SignatureSet& gs) {
  const Bijection bij = a.bijection.empty() ? identity_bijection(fs)
                                            : load(a.bijection, [](const Json& j) { return io::bijection_from_json(j); });
  try {
    check_bijection(fs, gs, bij);
  } catch (const HolantError& e) {
    throw io::FormatError(std::string("bijection: ") + e.what());
  }
  return bij;
}

Outcome run_check_indist(const PairArgs& a, double tol) {
  const auto fs = load_set(a.f);
  const auto gs = load_set(a.g);
  const auto bij = load_bijection(a, fs, gs);
  const auto r = check_indistinguishable(fs, gs, bij, a.max_vertices, tol);
  Outcome o{report_with(r.indistinguishable ? "indistinguishable_at_bound" : "distinguished")};
  o.code = r.indistinguishable ? kExitPass : kExitFail;
  o.report["max_vertices"] = a.max_vertices;
  o.report["grids"] = r.grids;
  o.report["max_abs_difference"] = r.max_abs_difference;
  o.report["bound_relative"] = true;
  if (r.distinguisher) {
    Json d;
    d["index"] = r.distinguisher->index;
    d["grid"] = io::grid_to_json(r.distinguisher->grid);
    d["value_f"] = io::complex_to_json(r.distinguisher->value_f);
    d["value_g"] = io::complex_to_json(r.distinguisher->value_g);
    o.report["distinguisher"] = std::move(d);
    if (!a.witness.empty()) io::write_json_file(a.witness, io::grid_to_json(r.distinguisher->grid));
  }
  return o;
}

Outcome run_vanishing(const std::string& sigs, const std::string& profile, int max_vertices,
                      const std::string& witness) {
  const Shape p = parse_profile(profile);
  const auto fs = load_set(sigs);
  const auto r = gram_nondegenerate(fs, p, max_vertices);
  Outcome o{report_with(to_string(r.verdict))};
  o.code = r.verdict == GramVerdict::nonvanishing_at_bound ? kExitPass : kExitFail;
  o.report["profile"] = {p.left, p.right};
  o.report["max_vertices"] = max_vertices;
  o.report["dim"] = r.dim;
  o.report["partner_dim"] = r.partner_dim;
  o.report["rank"] = r.rank;
  o.report["singular_values"] = r.singular_values;
  o.report["bound_relative"] = true;
  if (r.witness) {
    o.report["witness"] = io::gadget_to_json(*r.witness);
    o.report["witness_signature"] = io::signature_to_json(*r.witness_signature);
    o.report["witness_pairing"] = r.witness_pairing;
    if (!witness.empty()) io::write_json_file(witness, io::gadget_to_json(*r.witness));
  }
  return o;
}

Outcome run_simsim(const std::string& f, const std::string& g, int max_word_len, double tol) {
  const auto fs = load(f, [](const Json& j) { return io::matrix_list_from_json(j); });
  const auto gs = load(g, [](const Json& j) { return io::matrix_list_from_json(j); });
  if (fs.empty() || fs.size() != gs.size()) throw io::FormatError("simsim needs two nonempty lists of equal length");
  if (fs[0].rows() != gs[0].rows()) throw io::FormatError("simsim needs matrices of one size on both sides");
  const int q = static_cast<int>(fs[0].rows());

  const auto trace = trace_words_equal(fs, gs, max_word_len);
  Json tj;
  tj["max_len"] = trace.max_len;
  tj["words_checked"] = trace.words_checked;
  tj["saturated"] = trace.saturated;
  tj["bound_relative"] = !trace.saturated;
  auto mismatch = [&](const Word& w) {
    Json wj = word_json(w, fs.size());
    wj["trace_f"] = io::complex_to_json(eval_word(fs, w, q).trace());
    wj["trace_g"] = io::complex_to_json(eval_word(gs, w, q).trace());
    return wj;
  };
  if (!trace.equal) {
    Outcome o{report_with("trace_mismatch"), kExitFail};
    o.report["residual"] = nullptr;
    o.report["witness"] = mismatch(*trace.word);
    o.report["trace_check"] = std::move(tj);
    return o;
  }

  RecoveryOptions opts;
  opts.tol = tol;
  const auto r = recover_transform(fs, gs, opts);
  Outcome o{report_with(to_string(r.status))};
  o.code = r.status == RecoveryStatus::similar ? kExitPass : kExitFail;
  if (r.transform) {
    o.report["transform"] = io::matrix_to_json(*r.transform);
    o.report["residual"] = r.residual;
    o.report["condition"] = r.condition;
  } else {
    o.report["residual"] = nullptr;
  }
  Json blocks = Json::array();
  for (auto [start, size] : r.blocks) blocks.push_back({start, size});
  o.report["blocks"] = std::move(blocks);
  if (!r.detail.empty()) o.report["detail"] = r.detail;
  if (r.status == RecoveryStatus::trace_mismatch && r.word) o.report["witness"] = mismatch(*r.word);
  if (r.status == RecoveryStatus::vanishing && r.radical_element) {
    Json w;
    w["side"] = std::string(1, r.side);
    w["radical_element"] = io::matrix_to_json(*r.radical_element);
    o.report["witness"] = std::move(w);
  }
  if (r.status == RecoveryStatus::not_covanishing && r.coefficients) {
    Json w;
    w["side"] = std::string(1, r.side);
    Json words = Json::array();
    for (const auto& word : r.words) words.push_back(word_string(word, generator_names(fs.size())));
    w["words"] = std::move(words);
    Json cs = Json::array();
    for (Eigen::Index i = 0; i < r.coefficients->size(); ++i) cs.push_back(io::complex_to_json((*r.coefficients)(i)));
    w["coefficients"] = std::move(cs);
    o.report["witness"] = std::move(w);
  }
  o.report["trace_check"] = std::move(tj);
  return o;
}

Outcome run_selftest_command(std::uint64_t seed) {
  const auto results = run_selftest(seed);
  const bool all = std::all_of(results.begin(), results.end(), [](const FixtureResult& r) { return r.passed; });
  Outcome o{report_with(all ? "pass" : "fail"), all ? kExitPass : kExitFail};
  Json list = Json::array();
  for (const auto& r : results) {
    Json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["detail"] = r.detail;
    list.push_back(std::move(j));
  }
  o.report["fixtures"] = std::move(list);
  return o;
}

int emit(const Outcome& o, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string text = io::dump(o.report);
  out << text;
  if (!cfg.output.empty()) {
    try {
      io::write_json_file(cfg.output, o.report);
    } catch (const HolantError& e) {
      err << e.what() << "\n";
      return kExitUsage;
    }
  }
  return o.code;
}

int error_report(const std::string& verdict, const std::string& message, int code, std::ostream& out,
                 std::ostream& err) {
  Json j = report_with(verdict);
  j["message"] = message;
  out << io::dump(j);
  err << "holant: " << message << "\n";
  return code;
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  if (const char* env = std::getenv("HOLANT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0) || !std::isfinite(v)) {
      throw UsageError(std::string("HOLANT_TOL must be a positive number, got \"") + env + "\"");
    }
    cfg.tolerance = v;
  }
  return cfg;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = default_config();
  } catch (const HolantError& e) {
    return error_report("usage_error", e.what(), kExitUsage, out, err);
  }

  CLI::App app{"Holant workbench", "holant"};
  app.require_subcommand(1, 1);
  app.add_option("--seed", cfg.seed, "Seed for randomized corpora");
  app.add_option("--output", cfg.output, "Also write the report to this file");

  EvalArgs eval;
  eval.tol = cfg.tolerance;
  auto* c_eval = app.add_subcommand("eval", "Holant value of a grid, or signature of a gadget");
  c_eval->add_option("grid", eval.grid, "Grid or gadget JSON")->required();
  c_eval->add_option("--sigs", eval.sigs, "Signature set JSON")->required();
  c_eval->add_option("--method", eval.method)->check(CLI::IsMember({"brute", "contract"}));
  c_eval->add_option("--tol", eval.tol, "Threshold for the \"zero\" flag")->check(CLI::PositiveNumber);
  c_eval->add_option("--max-intermediate", eval.max_intermediate)->check(CLI::PositiveNumber);

  std::string poly_grid;
  auto* c_poly = app.add_subcommand("poly", "Holant polynomial of a closed grid");
  c_poly->add_option("grid", poly_grid)->required();

  std::string hom_x, hom_g, hom_method = "holant";
  auto* c_hom = app.add_subcommand("hom", "Count homomorphisms X -> G");
  c_hom->add_option("--x", hom_x)->required();
  c_hom->add_option("--g", hom_g)->required();
  c_hom->add_option("--method", hom_method)->check(CLI::IsMember({"holant", "brute"}));

  std::string hd_f, hd_g, hd_witness;
  int hd_degree = 0, hd_vertices = 0;
  auto* c_homdist = app.add_subcommand("homdist", "Search a bounded-degree distinguishing left graph");
  c_homdist->add_option("--f", hd_f)->required();
  c_homdist->add_option("--g", hd_g)->required();
  c_homdist->add_option("--max-degree", hd_degree)->required()->check(CLI::PositiveNumber);
  c_homdist->add_option("--max-vertices", hd_vertices)->required()->check(CLI::Range(1, 10));
  c_homdist->add_option("--witness", hd_witness, "Write the distinguisher graph here");

  std::string tr_sigs, tr_matrix;
  bool tr_inverse = false;
  auto* c_transform = app.add_subcommand("transform", "Apply a holographic transformation");
  c_transform->add_option("--sigs", tr_sigs)->required();
  c_transform->add_option("--matrix", tr_matrix)->required();
  c_transform->add_flag("--inverse-check", tr_inverse);

  PairArgs pair;
  double indist_tol = cfg.tolerance;
  auto* c_indist = app.add_subcommand("check-indist", "Compare Holant values over all grids up to a bound");
  c_indist->add_option("--f", pair.f)->required();
  c_indist->add_option("--g", pair.g)->required();
  c_indist->add_option("--bijection", pair.bijection, "Name map JSON (default: identity)");
  c_indist->add_option("--max-vertices", pair.max_vertices)->required()->check(CLI::PositiveNumber);
  c_indist->add_option("--tol", indist_tol)->check(CLI::PositiveNumber);
  c_indist->add_option("--witness", pair.witness, "Write the distinguishing grid here");

  std::string van_sigs, van_profile, van_witness;
  int van_vertices = 0;
  auto* c_van = app.add_subcommand("vanishing", "Gram test for quantum vanishing at one profile");
  c_van->add_option("--sigs", van_sigs)->required();
  c_van->add_option("--profile", van_profile, "L,R")->required();
  c_van->add_option("--max-vertices", van_vertices)->required()->check(CLI::PositiveNumber);
  c_van->add_option("--witness", van_witness, "Write the witness gadget here");

  std::string ss_f, ss_g;
  int ss_len = -1;
  double ss_tol = cfg.verify_tolerance;
  auto* c_simsim = app.add_subcommand("simsim", "Recover T with T F_i T^-1 = G_i");
  c_simsim->add_option("--f", ss_f)->required();
  c_simsim->add_option("--g", ss_g)->required();
  c_simsim->add_option("--max-word-len", ss_len, "Trace word bound (default q^2)")->check(CLI::NonNegativeNumber);
  c_simsim->add_option("--tol", ss_tol)->check(CLI::PositiveNumber);

  std::string cx_a = "0", cx_b = "0";
  double cx_eps = 0;
  auto* c_cx = app.add_subcommand("counterexample", "Orbit-closure family for the disequality pair");
  c_cx->add_option("--a", cx_a, "RE,IM")->required();
  c_cx->add_option("--b", cx_b, "RE,IM")->required();
  c_cx->add_option("--eps", cx_eps)->required()->check(CLI::PositiveNumber);

  auto* c_self = app.add_subcommand("selftest", "Run the built-in fixtures");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    return error_report("usage_error", e.what(), kExitUsage, out, err);
  }

  try {
    Outcome o;
    if (c_eval->parsed()) {
      o = run_eval(eval);
    } else if (c_poly->parsed()) {
      o = run_poly(poly_grid);
    } else if (c_hom->parsed()) {
      o = run_hom(hom_x, hom_g, hom_method);
    } else if (c_homdist->parsed()) {
      o = run_homdist(hd_f, hd_g, hd_degree, hd_vertices, hd_witness);
    } else if (c_transform->parsed()) {
      o = run_transform(tr_sigs, tr_matrix, tr_inverse, cfg.tolerance);
    } else if (c_indist->parsed()) {
      o = run_check_indist(pair, indist_tol);
    } else if (c_van->parsed()) {
      o = run_vanishing(van_sigs, van_profile, van_vertices, van_witness);
    } else if (c_simsim->parsed()) {
      o = run_simsim(ss_f, ss_g, ss_len, ss_tol);
    } else if (c_cx->parsed()) {
      o = run_counterexample(cx_a, cx_b, cx_eps);
    } else if (c_self->parsed()) {
      o = run_selftest_command(cfg.seed);
    }
    return emit(o, cfg, out, err);
  } catch (const UsageError& e) {
    return error_report("usage_error", e.what(), kExitUsage, out, err);
  } catch (const io::FormatError& e) {
    return error_report("format_error", e.what(), kExitUsage, out, err);
  } catch (const HolantError& e) {
    return error_report("error", e.what(), kExitFail, out, err);
  }
}

// ---- fixtures ----

SignatureGrid xyy_grid() {
  SignatureGrid g;
  g.q = 2;
  const int x = g.add_vertex("x", {0, 2});
  const int y1 = g.add_vertex("y", {1, 0});
  const int y2 = g.add_vertex("y", {1, 0});
  g.connect(y1, 1, x, 1);
  g.connect(y2, 1, x, 2);
  return g;
}

SignatureSet disequality_pair_set(Complex a, Complex b) {
  SignatureSet s(2);
  s.add("ne", disequality_signature(2, {2, 0}));
  s.add("F", SymBoolSignature{{a, b, 1, 0, 0}, {0, 4}}.expand());
  return s;
}

namespace {

FixtureResult fixture_polynomial() {
  const auto p = holant_polynomial(xyy_grid());
  auto var = [](std::string s, std::vector<int> i) { return Variable{std::move(s), std::move(i)}; };
  bool ok = p.size() == 4;
  ok = ok && p.coefficient({var("x", {0, 0}), var("y", {0}), var("y", {0})}) == Complex(1);
  ok = ok && p.coefficient({var("x", {0, 1}), var("y", {0}), var("y", {1})}) == Complex(1);
  ok = ok && p.coefficient({var("x", {1, 0}), var("y", {0}), var("y", {1})}) == Complex(1);
  ok = ok && p.coefficient({var("x", {1, 1}), var("y", {1}), var("y", {1})}) == Complex(1);
  return {"polynomial", ok, p.to_string()};
}

FixtureResult fixture_indistinguishable() {
  const auto f = disequality_pair_set(1, 1);
  const auto g = disequality_pair_set(0, 0);
  const auto r = check_indistinguishable(f, g, identity_bijection(f), 6, 0);
  const bool ok = r.indistinguishable && r.max_abs_difference == 0;
  return {"indistinguishable_pair", ok,
          std::to_string(r.grids) + " grids, max difference " + short_num(r.max_abs_difference)};
}

FixtureResult fixture_vanishing() {
  const auto r = gram_nondegenerate(disequality_pair_set(1, 1), {0, 4}, 6);
  bool ok = r.verdict == GramVerdict::vanishing_witness && r.witness_signature;
  double worst = 0;
  if (ok) {
    const auto& k = *r.witness_signature;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (std::popcount(i) >= 2) worst = std::max(worst, std::abs(k[i]));
    }
    ok = worst < 1e-9;
  }
  return {"vanishing_witness", ok, to_string(r.verdict) + ", max |entry| at weight >= 2: " + short_num(worst)};
}

FixtureResult fixture_jordan() {
  double prev = INFINITY;
  bool ok = true;
  const auto j = MixedTensor::matrix(2, {2, 1, 0, 2});
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double d = epsilon_family_jordan(j, eps).distance;
    ok = ok && d < prev;
    prev = d;
  }
  const double nil = epsilon_family_jordan(MixedTensor::matrix(2, {0, 1, 0, 0}), 1e-3).result.norm();
  ok = ok && nil <= 1e-3 * (1 + 1e-12);
  return {"epsilon_jordan", ok, "nilpotent norm at eps 1e-3: " + short_num(nil)};
}

FixtureResult fixture_hom(std::uint64_t seed) {
  bool ok = hom_count(SimpleGraph::complete(3), SimpleGraph::complete(3)) == 6 &&
            hom_count(SimpleGraph::cycle(4), SimpleGraph::complete(2)) == 2;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(1, 5);
  std::bernoulli_distribution coin(0.5);
  int pairs = 0;
  for (; pairs < 100 && ok; ++pairs) {
    SimpleGraph gs[2];
    for (auto& g : gs) {
      g.n = size(rng);
      for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
          if (coin(rng)) g.edges.push_back({u, v});
    }
    ok = hom_count(gs[0], gs[1], HomMethod::holant) == hom_count(gs[0], gs[1], HomMethod::brute);
  }
  return {"hom_agreement", ok, std::to_string(pairs) + " random pairs"};
}

}  // namespace

std::vector<FixtureResult> run_selftest(std::uint64_t seed) {
  std::vector<std::function<FixtureResult()>> fixtures = {
      fixture_polynomial, fixture_indistinguishable, fixture_vanishing, fixture_jordan, [seed] { return fixture_hom(seed); }};
  std::vector<FixtureResult> out;
  for (const auto& f : fixtures) {
    try {
      out.push_back(f());
    } catch (const HolantError& e) {
      out.push_back({"fixture", false, e.what()});
    }
  }
  // Names are fixed even when a fixture throws.
  const char* names[] = {"polynomial", "indistinguishable_pair", "vanishing_witness", "epsilon_jordan", "hom_agreement"};
  for (std::size_t i = 0; i < out.size(); ++i) out[i].name = names[i];
  return out;
}

}  // namespace holant
