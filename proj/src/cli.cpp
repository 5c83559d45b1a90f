#include "bilin/cli.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "bilin/ec.hpp"
#include "bilin/gallery.hpp"

namespace bilin::cli {

namespace {

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageFailure("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageFailure("cannot write " + path);
  out << text;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t at = s.find(sep, start);
    parts.push_back(trim(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

Vector parse_vector(std::string_view text, const FieldSpec& field) {
  Vector v;
  for (const auto& c : split(text, ',')) {
    if (c.empty()) throw UsageFailure("empty coordinate in '" + std::string(text) + "'");
    v.push_back(Scalar::parse(c, field));
  }
  return v;
}

// "1,0,0;0,1,0"; the empty string is the empty tuple.
Tuple parse_tuple(std::string_view text, const FieldSpec& field) {
  Tuple t;
  if (trim(text).empty()) return t;
  for (const auto& part : split(text, ';')) t.push_back(parse_vector(part, field));
  return t;
}

std::string format_tuple(const Tuple& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? ";" : "") + format_vector(t[i]);
  return out;
}

Assignment parse_assignment(const std::vector<std::string>& items, const FieldSpec& field) {
  Assignment a;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageFailure("assignment '" + item + "' is not NAME=VECTOR");
    std::string name = trim(std::string_view(item).substr(0, eq));
    if (name.empty()) throw UsageFailure("assignment '" + item + "' has no variable name");
    a[name] = parse_vector(std::string_view(item).substr(eq + 1), field);
  }
  return a;
}

std::string verdict(bool b) { return b ? "true" : "false"; }

struct Options {
  std::string space, a, b, c, tuple, formula, mode = "qf", field, flavor, out, f1, f2, cube;
  std::vector<std::string> assign;
  std::size_t n = 0, m = 0, retries = 200;
  std::uint64_t seed = 1;
};

FieldSpec field_or(const Options& o, const char* fallback) {
  return FieldSpec::parse(o.field.empty() ? std::string(fallback) : o.field);
}

Flavor flavor_or(const Options& o, const char* fallback) {
  return parse_flavor(o.flavor.empty() ? std::string(fallback) : o.flavor);
}

BilinearSpace load_space(const Options& o) {
  if (o.space.empty()) throw UsageFailure("--space is required");
  return BilinearSpace::parse_file(read_file(o.space));
}

int cmd_check_indep(const Options& o, std::ostream& out) {
  BilinearSpace v = load_space(o);
  Tuple a = parse_tuple(o.a, v.field()), b = parse_tuple(o.b, v.field()), c = parse_tuple(o.c, v.field());
  bool s = is_independent(v, a, b, c, IndepMethod::SpanIntersection);
  bool e = is_independent(v, a, b, c, IndepMethod::BasisExtension);
  out << "span_intersection = " << verdict(s) << "\n";
  out << "basis_extension = " << verdict(e) << "\n";
  if (s != e) throw Error(ErrorKind::PreconditionFailed, "the two formulations disagree");
  out << "independent = " << verdict(s) << "\n";
  return s ? Success : FalseVerdict;
}

int cmd_local_base(const Options& o, std::ostream& out) {
  BilinearSpace v = load_space(o);
  Tuple base = local_base(v, parse_tuple(o.a, v.field()), parse_tuple(o.b, v.field()));
  out << "local_base = " << format_tuple(base) << "\n";
  return Success;
}

int cmd_amalgamate(const Options& o, std::ostream& out) {
  BilMap f1 = parse_map_file(read_file(o.f1));
  BilMap f2 = parse_map_file(read_file(o.f2));
  AmalgamResult r = amalgamate_independent(f1, f2);
  if (!o.out.empty()) write_file(o.out, r.space.to_file());
  out << r.space.to_file() << "g1\n" << r.g1.matrix.format() << "g2\n" << r.g2.matrix.format();
  return Success;
}

int cmd_amalgamate3(const Options& o, std::ostream& out) {
  Cube cube = Cube::parse_file(read_file(o.cube));
  Amalgam3Result r = amalgamate3(cube);
  auto violations = amalgam3_violations(cube, r);
  if (!o.out.empty()) write_file(o.out, r.space.to_file());
  out << r.space.to_file() << "v1\n"
      << r.v1.matrix.format() << "v2\n"
      << r.v2.matrix.format() << "v3\n"
      << r.v3.matrix.format();
  for (const auto& v : violations) out << "violation: " << v << "\n";
  out << "postconditions = " << (violations.empty() ? "ok" : "failed") << "\n";
  return violations.empty() ? Success : FalseVerdict;
}

int cmd_eval(const Options& o, std::ostream& out) {
  if (o.mode == "generic") {
    FieldSpec field = o.space.empty() ? field_or(o, "Q") : load_space(o).field();
    Flavor flavor = o.space.empty() ? flavor_or(o, "symmetric") : load_space(o).flavor();
    Formula f = parse_formula(o.formula, field);
    for (const auto& r : to_regular_disjunction(f)) {
      GenericVerdict g = ec_sat_regular_generic(field, flavor, r);
      if (!g.satisfiable) continue;
      out << "satisfiable = true\n" << g.model.to_file();
      auto names = r.variables();
      for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << " = " << format_vector(g.witness[i]) << "\n";
      return Success;
    }
    out << "satisfiable = false\n";
    return FalseVerdict;
  }
  BilinearSpace v = load_space(o);
  Formula f = parse_formula(o.formula, v.field());
  Assignment a = parse_assignment(o.assign, v.field());
  bool result;
  if (o.mode == "qf")
    result = eval(f, v, a, EvalMode::QuantifierFree);
  else if (o.mode == "brute")
    result = eval(f, v, a, EvalMode::Brute);
  else
    result = ec_eval_finite(v.field(), v.flavor(), v, f, a);
  out << verdict(result) << "\n";
  return result ? Success : FalseVerdict;
}

int cmd_theta(const Options& o, std::ostream& out) {
  out << print_formula(theta(o.n, field_or(o, "Q"))) << "\n";
  return Success;
}

int cmd_forced_value(const Options& o, std::ostream& out) {
  FieldSpec field = field_or(o, "Q");
  auto parts = to_regular_disjunction(parse_formula(o.formula, field));
  if (parts.size() != 1)
    throw Error(ErrorKind::InvalidArgument, "forced-value needs a single regular formula, got " +
                                                std::to_string(parts.size()) + " disjuncts");
  out << forced_bilinear_value(parts.front(), flavor_or(o, "symmetric")).format() << "\n";
  return Success;
}

int cmd_qe(const Options& o, std::ostream& out) {
  FieldSpec field = field_or(o, "GF 2");
  out << print_formula(qe_finite(parse_formula(o.formula, field), o.n, field, flavor_or(o, "symmetric"))) << "\n";
  return Success;
}

int cmd_types(const Options& o, std::ostream& out) {
  FieldSpec field = field_or(o, "GF 2");
  auto types = enumerate_qf_types(o.n, field, flavor_or(o, "symmetric"));
  out << "count = " << types.size() << "\n";
  for (const auto& t : types) out << t.key() << "\n";
  return Success;
}

int cmd_isolate(const Options& o, std::ostream& out) {
  BilinearSpace v = load_space(o);
  out << print_formula(isolating_formula(qf_type_of(v, parse_tuple(o.tuple, v.field())), v.field())) << "\n";
  return Success;
}

int cmd_instability(const Options& o, std::ostream& out) {
  InstabilityWitness w = instability_witness(o.m, field_or(o, "GF 2"), flavor_or(o, "symmetric"));
  out << w.space.to_file() << "parameters = " << format_tuple(w.parameters) << "\n";
  std::set<std::string> keys;
  for (std::size_t chi = 0; chi < w.vectors.size(); ++chi) {
    std::string bits;
    for (std::size_t i = 0; i < o.m; ++i) bits += (chi >> i & 1) ? '1' : '0';
    out << "v_" << bits << " = " << format_vector(w.vectors[chi]) << "\n";
    Tuple t = w.parameters;
    t.push_back(w.vectors[chi]);
    keys.insert(qf_type_of(w.space, t).key());
  }
  out << "distinct_types = " << keys.size() << "\n";
  return keys.size() == w.vectors.size() ? Success : FalseVerdict;
}

int cmd_closure(const Options& o, std::ostream& out) {
  Closure c = nondegenerate_closure(load_space(o));
  if (!o.out.empty()) write_file(o.out, c.space.to_file());
  out << c.space.to_file() << "inclusion\n" << c.inclusion.matrix.format();
  return Success;
}

int report(const DemoReport& r, std::ostream& out) {
  out << r.render();
  return r.passed() ? Success : FalseVerdict;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact model theory of bilinear spaces", "bilin"};
  app.require_subcommand(1);
  Options o;

  const std::set<std::string> flavors{"plain", "symmetric", "alternating"};
  auto field_opt = [&](CLI::App* s) { s->add_option("--field", o.field, "Q, GF <p> or QSQRT <d>"); };
  auto flavor_opt = [&](CLI::App* s) {
    s->add_option("--flavor", o.flavor, "plain, symmetric or alternating")->check(CLI::IsMember(flavors));
  };

  auto* check_indep = app.add_subcommand("check-indep", "Is A independent from B over C");
  check_indep->add_option("--space", o.space)->required();
  check_indep->add_option("--a", o.a)->required();
  check_indep->add_option("--b", o.b)->required();
  check_indep->add_option("--c", o.c)->required();

  auto* lb = app.add_subcommand("local-base", "Basis of <A> ∩ <B>");
  lb->add_option("--space", o.space)->required();
  lb->add_option("--a", o.a)->required();
  lb->add_option("--b", o.b)->required();

  auto* amal = app.add_subcommand("amalgamate", "Independent amalgam of two map files over a shared source");
  amal->add_option("--f1", o.f1)->required();
  amal->add_option("--f2", o.f2)->required();
  amal->add_option("--out", o.out);

  auto* amal3 = app.add_subcommand("amalgamate3", "Amalgam of a cube file");
  amal3->add_option("--cube", o.cube)->required();
  amal3->add_option("--out", o.out);

  auto* ev = app.add_subcommand("eval", "Evaluate a formula");
  ev->add_option("--space", o.space);
  ev->add_option("--formula", o.formula)->required();
  ev->add_option("--assign", o.assign, "NAME=VECTOR, repeatable");
  ev->add_option("--mode", o.mode)->check(CLI::IsMember({"qf", "brute", "ec", "generic"}));
  field_opt(ev);
  flavor_opt(ev);

  auto* th = app.add_subcommand("theta", "Linear independence formula");
  th->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
  field_opt(th);

  auto* fv = app.add_subcommand("forced-value", "Value forced on [z1,z2] by a regular formula");
  fv->add_option("--formula", o.formula)->required();
  field_opt(fv);
  flavor_opt(fv);

  auto* qe = app.add_subcommand("qe", "Quantifier elimination over a finite field");
  qe->add_option("--n", o.n)->required();
  qe->add_option("--formula", o.formula)->required();
  field_opt(qe);
  flavor_opt(qe);

  auto* types = app.add_subcommand("types", "Quantifier-free types");
  types->require_subcommand(1);
  auto* types_enum = types->add_subcommand("enumerate", "All qf n-types, sorted by key");
  types_enum->add_option("--n", o.n)->required();
  field_opt(types_enum);
  flavor_opt(types_enum);

  auto* iso = app.add_subcommand("isolate", "Isolating formula of a tuple's type");
  iso->add_option("--space", o.space)->required();
  iso->add_option("--tuple", o.tuple)->required();

  auto* inst = app.add_subcommand("instability", "2^m parameter-separated types");
  inst->add_option("--m", o.m)->required();
  field_opt(inst);
  flavor_opt(inst);

  auto* clo = app.add_subcommand("closure", "Non-degenerate closure");
  clo->add_option("--space", o.space)->required();
  clo->add_option("--out", o.out);

  auto* gal = app.add_subcommand("gallery", "Self-checking demonstrations");
  gal->require_subcommand(1);
  auto* g_stat = gal->add_subcommand("stationarity", "Stationarity failure over C");
  g_stat->add_option("--space", o.space, "space file for C (default: the zero space)");
  field_opt(g_stat);
  flavor_opt(g_stat);
  auto* g_hil = gal->add_subcommand("hilbert", "Non-positive-definite 3-amalgam");
  auto* g_hau = gal->add_subcommand("hausdorff", "Two completions that cannot be amalgamated");
  field_opt(g_hau);
  flavor_opt(g_hau);
  auto* g_qe = gal->add_subcommand("qe-refuter", "Refutes a qf definition of linear independence");
  g_qe->add_option("--formula", o.formula)->required();
  g_qe->add_option("--n", o.n)->required();
  g_qe->add_option("--seed", o.seed);
  g_qe->add_option("--retries", o.retries);
  field_opt(g_qe);
  flavor_opt(g_qe);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Success : UsageError;
  }

  try {
    if (check_indep->parsed()) return cmd_check_indep(o, out);
    if (lb->parsed()) return cmd_local_base(o, out);
    if (amal->parsed()) return cmd_amalgamate(o, out);
    if (amal3->parsed()) return cmd_amalgamate3(o, out);
    if (ev->parsed()) return cmd_eval(o, out);
    if (th->parsed()) return cmd_theta(o, out);
    if (fv->parsed()) return cmd_forced_value(o, out);
    if (qe->parsed()) return cmd_qe(o, out);
    if (types_enum->parsed()) return cmd_types(o, out);
    if (iso->parsed()) return cmd_isolate(o, out);
    if (inst->parsed()) return cmd_instability(o, out);
    if (clo->parsed()) return cmd_closure(o, out);
    if (g_stat->parsed()) {
      BilinearSpace c = o.space.empty() ? BilinearSpace::zero_form(field_or(o, "Q"), flavor_or(o, "symmetric"), 0)
                                        : load_space(o);
      return report(demo_stationarity(c), out);
    }
    if (g_hil->parsed()) return report(demo_hilbert_3amalg(), out);
    if (g_hau->parsed()) return report(demo_hausdorff_failure(field_or(o, "Q"), flavor_or(o, "plain")), out);
    if (g_qe->parsed()) {
      FieldSpec field = field_or(o, "Q");
      return report(demo_qe_refuter(parse_formula(o.formula, field), o.n, field, flavor_or(o, "symmetric"),
                                    o.retries, o.seed),
                    out);
    }
  } catch (const UsageFailure& e) {
    err << "usage error: " << e.what() << "\n";
    return UsageError;
  } catch (const ParseError& e) {
    err << "parse error at " << e.position() << ": " << e.what() << "\n";
    return UsageError;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return DomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return DomainError;
  }
  err << "usage error: no subcommand\n";
  return UsageError;
}

}  // namespace bilin::cli
