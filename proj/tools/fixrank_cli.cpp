// Command-line front end. Exit codes: 0 success, 1 verification failure or
// internal error, 2 refusal by theorem, 3 search backend exhausted,
// 4 malformed input.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fixrank/fixrank.hpp"
#include "fixrank/io.hpp"

namespace {

using fixrank::Index;
using fixrank::io::json;
using fixrank::io::InputError;

constexpr int kOk = 0, kFailed = 1, kRefused = 2, kExhausted = 3, kBadInput = 4;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

std::optional<std::string> opt_field(const std::string& f) {
  return f.empty() ? std::nullopt : std::optional<std::string>(f);
}

int refusal_exit(const fixrank::Refusal& r) {
  using fixrank::RefusalKind;
  return r.kind == RefusalKind::BackendExhausted || r.kind == RefusalKind::NotCovered ? kExhausted : kRefused;
}

template <class F>
json spectrum_json(const F& field, const fixrank::WeierstrassStructure<fixrank::Elem<F>>& s) {
  using E = fixrank::Elem<F>;
  json out = json::array();
  std::vector<fixrank::ExtPoint<E>> pts;
  if (s.has_eigenvalue(std::nullopt)) pts.emplace_back(std::nullopt);
  for (const auto& x : fixrank::field_roots(field, s[s.size() - 1].finite())) pts.emplace_back(x);
  for (const auto& c : pts)
    out.push_back(json{{"point", fixrank::io::point_to_json(c)},
                       {"partial_multiplicities", s.partial_multiplicities(c)},
                       {"algebraic_multiplicity", s.algebraic_multiplicity(c)}});
  return out;
}

template <class F>
json analyze(const F& field, const json& doc) {
  const auto a = fixrank::io::pencil_from_json(field, doc);
  const Index rk = fixrank::normal_rank(a);
  json out{{"field", field.name()}, {"m", a.rows()}, {"n", a.cols()}, {"normal_rank", rk}};
  out["regular"] = fixrank::is_regular(a);
  if (!out["regular"].get<bool>()) return out;
  const auto s = fixrank::weierstrass_structure(field, a);
  json inv = json::array();
  for (const auto& g : s.finite_factors()) inv.push_back(fixrank::io::poly_to_json(g));
  out["invariant_factors"] = inv;
  out["hfactors"] = fixrank::io::structure_to_json(s)["hfactors"];
  out["determinant"] = fixrank::io::poly_to_json(fixrank::determinant(a.poly()));
  out["spectrum"] = spectrum_json(field, s);
  return out;
}

// A pair document holds "A" and either a pencil "B" or a structure "psi".
template <class F>
std::pair<fixrank::Pencil<fixrank::Elem<F>>, fixrank::WeierstrassStructure<fixrank::Elem<F>>> read_pair(
    const F& field, const json& doc) {
  if (!doc.contains("A")) throw InputError("pair document needs \"A\"");
  auto a = fixrank::io::pencil_from_json(field, doc["A"]);
  if (!fixrank::is_regular(a)) throw InputError("A is not a regular pencil");
  if (doc.contains("B")) {
    auto b = fixrank::io::pencil_from_json(field, doc["B"]);
    if (!fixrank::is_regular(b) || b.rows() != a.rows()) throw InputError("B must be regular and the same size as A");
    return {a, fixrank::weierstrass_structure(field, b)};
  }
  if (doc.contains("psi")) {
    auto psi = fixrank::io::structure_from_json(field, doc["psi"]);
    if (psi.size() != a.rows() || !psi.valid()) throw InputError("psi must be a valid structure of size n");
    return {a, psi};
  }
  throw InputError("pair document needs \"B\" or \"psi\"");
}

template <class F>
json check(const F& field, const json& doc, std::optional<Index> r) {
  const auto [a, psi] = read_pair(field, doc);
  const auto phi = fixrank::weierstrass_structure(field, a);
  json out{{"field", field.name()},
           {"phi", fixrank::io::structure_to_json(phi)},
           {"psi", fixrank::io::structure_to_json(psi)},
           {"min_rank", fixrank::min_rank(phi, psi)}};
  if (r) {
    const auto rep = fixrank::interlace(phi, psi, *r);
    json il{{"r", rep.r}, {"holds", rep.holds}, {"first_violation", nullptr}};
    if (rep.first_violation)
      il["first_violation"] = json{{"i", rep.first_violation->i},
                                   {"side", rep.first_violation->side == fixrank::Side::lower ? "lower" : "upper"}};
    out["interlace"] = il;
  }
  const auto app = fixrank::applicability(field, phi, psi);
  out["applicability"] = json{
      {"joint_spectrum_covers_field", app.joint_spectrum_covers_field},
      {"witness_c", app.witness_c ? fixrank::io::point_to_json(*app.witness_c) : json(nullptr)},
      {"shared_multiplicity_lambda0",
       app.shared_multiplicity_lambda0 ? fixrank::io::point_to_json(*app.shared_multiplicity_lambda0) : json(nullptr)},
      {"scalar_exception", app.scalar_exception}};
  if (doc.contains("B")) {
    const auto b = fixrank::io::pencil_from_json(field, doc["B"]);
    try {
      out["const_rank_bound"] = json{{"value", fixrank::const_rank_bound(field, a, b)}, {"informational", true}};
    } catch (const std::invalid_argument&) {
      // Only defined for pencils with identity leading coefficient.
    }
  }
  return out;
}

template <class F>
int synth(const F& field, const json& doc, Index r, const fixrank::SynthOptions& opt, const std::string& out_path) {
  const auto [a, psi] = read_pair(field, doc);
  auto res = fixrank::synthesize(field, a, psi, r, opt);
  if (auto* ref = std::get_if<fixrank::Refusal>(&res)) {
    write_json(fixrank::io::refusal_to_json(*ref), out_path);
    return refusal_exit(*ref);
  }
  json out = fixrank::io::certificate_to_json(field.name(), std::get<0>(res));
  out["refused"] = false;
  write_json(out, out_path);
  return kOk;
}

template <class F>
int place(const F& field, const json& doc, Index r, const std::string& det, const fixrank::SynthOptions& opt,
          const std::string& out_path) {
  const auto a = fixrank::io::pencil_from_json(field, doc);
  if (!fixrank::is_regular(a)) throw InputError("pencil is not regular");
  json coeffs;
  try {
    coeffs = json::parse(det);
  } catch (const json::parse_error&) {
    throw InputError("--det must be a JSON coefficient array");
  }
  const auto q = fixrank::io::poly_from_json(field, coeffs);
  if (q.is_zero()) throw InputError("--det must be a nonzero polynomial");
  auto res = fixrank::place_poly(field, a, r, q, opt);
  if (auto* ref = std::get_if<fixrank::Refusal>(&res)) {
    write_json(fixrank::io::refusal_to_json(*ref), out_path);
    return refusal_exit(*ref);
  }
  const auto& pc = std::get<0>(res);
  json out = fixrank::io::certificate_to_json(field.name(), pc.cert);
  out["refused"] = false;
  out["k"] = fixrank::io::element_to_json(pc.k);
  write_json(out, out_path);
  return kOk;
}

template <class F>
int verify(const F& field, const json& adoc, const json& cert, const std::string& out_path) {
  const auto a = fixrank::io::pencil_from_json(field, adoc);
  if (!cert.contains("P") || !cert.contains("rank") || !cert.contains("achieved"))
    throw InputError("certificate needs \"P\", \"rank\" and \"achieved\"");
  const auto p = fixrank::io::pencil_from_json(field, cert["P"]);
  const auto psi = fixrank::io::structure_from_json(field, cert["achieved"]);
  const auto r = cert["rank"].get<Index>();
  if (p.rows() != a.rows() || p.cols() != a.cols() || psi.size() != a.rows())
    throw InputError("certificate sizes do not match the pencil");
  const bool ok = fixrank::is_regular(a) && fixrank::verify_certificate(field, a, p, psi, r);
  json out{{"valid", ok}, {"normal_rank", fixrank::normal_rank(p)}};
  const auto sum = a + p;
  if (fixrank::is_regular(sum)) out["structure"] = fixrank::io::structure_to_json(fixrank::weierstrass_structure(field, sum));
  write_json(out, out_path);
  return ok ? kOk : kFailed;
}

int oracle(const fixrank::PrimeField& field, Index n, std::optional<Index> rank, const json& adoc,
           const std::string& out_path) {
  const auto a = fixrank::io::pencil_from_json(field, adoc);
  if (a.rows() != n || a.cols() != n) throw InputError("pencil size differs from --n");
  if (!fixrank::is_regular(a)) throw InputError("pencil is not regular");
  fixrank::OracleTable table(field, n);
  table.build();
  const auto universe = fixrank::all_structures(field, n);
  const auto by_rank = fixrank::reachable_by_rank(table, a);
  const auto phi = fixrank::weierstrass_structure(field, a);
  json ranks = json::array();
  bool clean = true;
  for (Index r = 0; r <= n; ++r) {
    if (rank && *rank != r) continue;
    const auto c = fixrank::compare(table, a, r, universe, by_rank[r]);
    auto list = [](const auto& v) {
      json arr = json::array();
      for (const auto& s : v) arr.push_back(fixrank::io::structure_to_json(s));
      return arr;
    };
    json missing = json::array();
    for (const auto& psi : c.missing) {
      const auto v = fixrank::theory_verdict(field, phi, psi, r);
      missing.push_back(json{{"structure", fixrank::io::structure_to_json(psi)},
                             {"theory", v == fixrank::Verdict::Feasible ? "feasible" : "unknown"}});
    }
    clean = clean && c.extra.empty();
    ranks.push_back(json{{"r", r}, {"reachable", list(c.reachable)}, {"predicate", list(c.predicate)},
                         {"missing", missing}, {"extra", list(c.extra)}});
  }
  write_json(json{{"field", field.name()}, {"n", n}, {"A", fixrank::io::pencil_to_json(field, a)}, {"ranks", ranks}},
             out_path);
  return clean ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-rank perturbations of regular matrix pencils"};
  app.require_subcommand(1);
  std::string field_flag;
  std::uint64_t seed = 0;
  app.add_option("--field", field_flag, "Field when the input does not name one: q or gf(p)");
  app.add_option("--seed", seed, "Shuffle search candidates (0 keeps the canonical order)");

  std::string input, out_path, det, pencil_path, a_path, cert_path;
  std::optional<Index> rank;
  Index n = 0;

  auto* analyze_cmd = app.add_subcommand("analyze", "Rank, regularity and Weierstrass structure of a pencil");
  analyze_cmd->add_option("--input", input, "Pencil JSON")->required();
  analyze_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* check_cmd = app.add_subcommand("check", "Interlacing and applicability report for a pair");
  check_cmd->add_option("--input", input, "Pair JSON with A and B (or psi)")->required();
  check_cmd->add_option("--rank", rank, "Rank r for the interlacing test");
  check_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* min_cmd = app.add_subcommand("min-rank", "Minimal perturbation rank for a pair");
  min_cmd->add_option("--input", input, "Pair JSON with A and B (or psi)")->required();
  min_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* synth_cmd = app.add_subcommand("synth", "Construct a rank-r perturbation reaching the target");
  synth_cmd->add_option("--input", input, "Pair JSON with A and B (or psi)")->required();
  synth_cmd->add_option("--rank", rank, "Perturbation rank r")->required();
  synth_cmd->add_option("--out", out_path, "Certificate file (default stdout)");

  auto* place_cmd = app.add_subcommand("place", "Construct a rank-r perturbation with prescribed determinant");
  place_cmd->add_option("--input", input, "Pencil JSON")->required();
  place_cmd->add_option("--rank", rank, "Perturbation rank r")->required();
  place_cmd->add_option("--det", det, "Target determinant coefficients, lowest first, e.g. \"[0,1,1]\"")->required();
  place_cmd->add_option("--out", out_path, "Certificate file (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Re-check a certificate against its pencil");
  verify_cmd->add_option("pencil", a_path, "Pencil JSON")->required();
  verify_cmd->add_option("certificate", cert_path, "Certificate JSON")->required();
  verify_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive reachability over a small prime field");
  oracle_cmd->add_option("--n", n, "Pencil size")->required();
  oracle_cmd->add_option("--rank", rank, "Only this rank (default: all)");
  oracle_cmd->add_option("--pencil", pencil_path, "Pencil JSON")->required();
  oracle_cmd->add_option("--report", out_path, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  fixrank::SynthOptions opt;
  opt.seed = seed;
  try {
    if (*analyze_cmd) {
      const json doc = read_json(input);
      const auto f = fixrank::io::field_of(doc, opt_field(field_flag));
      write_json(std::visit([&](const auto& fld) { return analyze(fld, doc); }, f), out_path);
      return kOk;
    }
    if (*check_cmd || *min_cmd) {
      const json doc = read_json(input);
      const auto f = fixrank::io::field_of(doc, opt_field(field_flag));
      json out = std::visit([&](const auto& fld) { return check(fld, doc, *check_cmd ? rank : std::nullopt); }, f);
      write_json(*check_cmd ? out : json{{"min_rank", out["min_rank"]}}, out_path);
      return kOk;
    }
    if (*synth_cmd) {
      const json doc = read_json(input);
      const auto f = fixrank::io::field_of(doc, opt_field(field_flag));
      return std::visit([&](const auto& fld) { return synth(fld, doc, *rank, opt, out_path); }, f);
    }
    if (*place_cmd) {
      const json doc = read_json(input);
      const auto f = fixrank::io::field_of(doc, opt_field(field_flag));
      return std::visit([&](const auto& fld) { return place(fld, doc, *rank, det, opt, out_path); }, f);
    }
    if (*verify_cmd) {
      const json adoc = read_json(a_path), cert = read_json(cert_path);
      const auto f = fixrank::io::field_of(adoc, opt_field(field_flag));
      return std::visit([&](const auto& fld) { return verify(fld, adoc, cert, out_path); }, f);
    }
    if (*oracle_cmd) {
      const json doc = read_json(pencil_path);
      const auto f = fixrank::io::field_of(doc, opt_field(field_flag));
      const auto* pf = std::get_if<fixrank::PrimeField>(&f);
      if (!pf) throw InputError("oracle runs over prime fields only");
      return oracle(*pf, n, rank, doc, out_path);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::length_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}
