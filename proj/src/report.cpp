#include "tel/report.hpp"

#include <map>
#include <sstream>

#include "json.hpp"

namespace tel {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json profile_json_obj(const TransfiniteProfile& p) {
  ordered_json j;
  j["alpha0"] = format_ordinal(p.alpha0);
  j["bound"] = format_rat(p.bound_a);
  ordered_json bps = ordered_json::array();
  for (const auto& b : p.breakpoints) {
    ordered_json e;
    e["gamma"] = format_ordinal(b.gamma);
    e["norm"] = format_rat(b.norm);
    e["at_marked"] = format_rat(b.at_marked);
    bps.push_back(e);
  }
  j["breakpoints"] = bps;
  j["norm_piecewise_exact"] = p.norm_piecewise_exact;
  j["strict_below_alpha0"] = p.strict_below;
  if (!p.notes.empty()) j["notes"] = p.notes;
  return j;
}

ordered_json verify_json_obj(const VerifyReport& rep) {
  ordered_json j;
  j["all_match"] = rep.all_match;
  ordered_json rows = ordered_json::array();
  for (const auto& r : rep.rows) {
    ordered_json e;
    e["gamma"] = format_ordinal(r.gamma);
    e["point"] = r.point;
    e["oracle"] = format_rat(r.oracle);
    e["claimed"] = format_rat(r.claimed);
    e["match"] = r.match;
    rows.push_back(e);
  }
  j["rows"] = rows;
  if (!rep.skipped.empty()) j["skipped"] = rep.skipped;
  return j;
}

struct Flags {
  std::map<std::string, std::string> kv;
  std::vector<std::string> bare;

  bool has(const std::string& k) const { return kv.count(k) > 0; }
  std::string get(const std::string& k, const std::string& dflt = "") const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  }
};

Flags parse_flags(const std::vector<std::string>& argv, std::size_t from) {
  Flags f;
  for (std::size_t i = from; i < argv.size(); ++i) {
    const std::string& a = argv[i];
    if (a.rfind("--", 0) == 0) {
      std::string key = a.substr(2);
      if (i + 1 < argv.size() && argv[i + 1].rfind("--", 0) != 0) {
        f.kv[key] = argv[++i];
      } else {
        f.kv[key] = "";
      }
    } else {
      f.bare.push_back(a);
    }
  }
  return f;
}

Budget budget_from(const Flags& f) {
  Budget b = Budget::from_env();
  if (f.has("max-depth")) b.max_depth = std::stol(f.get("max-depth"));
  if (f.has("max-witnesses")) b.max_witnesses = std::stol(f.get("max-witnesses"));
  if (f.has("timeout-ms")) b.timeout_ms = std::stol(f.get("timeout-ms"));
  return b;
}

std::vector<Ordinal> parse_gammas(const std::string& s) {
  std::vector<Ordinal> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_ordinal(item));
  return out;
}

ordered_json cmd_ordinal(const Flags& f) {
  Ordinal a = parse_ordinal(f.get("expr"));
  ordered_json j;
  j["canonical"] = format_ordinal(a);
  OrdinalKind k = classify(a);
  j["kind"] = k.tag == OrdTag::Zero ? "zero" : k.tag == OrdTag::Successor ? "successor" : "limit";
  if (k.predecessor) j["predecessor"] = format_ordinal(*k.predecessor);
  if (!a.is_zero()) j["irreducible"] = is_irreducible(a);
  if (f.has("add")) j["sum"] = format_ordinal(add(a, parse_ordinal(f.get("add"))));
  if (f.has("nat-mul")) j["nat_mul"] = format_ordinal(nat_mul(a, Int(f.get("nat-mul"))));
  if (f.has("compare")) {
    int c = compare(a, parse_ordinal(f.get("compare")));
    j["compare"] = c < 0 ? "less" : c > 0 ? "greater" : "equal";
  }
  if (f.has("fundamental"))
    j["fundamental"] = format_ordinal(fundamental_seq(a, Int(f.get("fundamental"))));
  return j;
}

ordered_json cmd_rank(const Flags& f) {
  SpacePtr E = parse_space(f.get("space"));
  ordered_json j;
  j["space"] = f.get("space");
  auto cls = canonical_class(E);
  j["cb_rank"] = format_ordinal(cls.first);
  j["top_count"] = cls.second.str();
  j["rho"] = format_ordinal(rho(E));
  if (f.has("point")) {
    PointPath p = PointPath::parse(f.get("point"));
    j["point"] = p.format();
    j["rank"] = format_ordinal(rank(E, p));
    if (f.has("relative")) {
      std::string rel = f.get("relative");
      MarkedSubset X;
      if (rel == "isolated") {
        X.kind = MarkedSubset::Kind::IsolatedPoints;
      } else if (rel.rfind("cofinite", 0) == 0) {
        X.kind = MarkedSubset::Kind::ComplementOfFinite;
        auto colon = rel.find(':');
        if (colon != std::string::npos) {
          std::stringstream ss(rel.substr(colon + 1));
          std::string item;
          while (std::getline(ss, item, ';')) X.removed.push_back(PointPath::parse(item));
        }
      } else {
        throw DomainError("unknown relative subset selector: " + rel);
      }
      j["relative_rank"] = format_ordinal(relative_rank(E, X, p));
      j["relative_cb_rank"] = format_ordinal(relative_cb_rank(E, X));
    }
  } else if (f.has("relative")) {
    std::string rel = f.get("relative");
    MarkedSubset X;
    if (rel == "isolated")
      X.kind = MarkedSubset::Kind::IsolatedPoints;
    else
      X.kind = MarkedSubset::Kind::ComplementOfFinite;
    j["relative_cb_rank"] = format_ordinal(relative_cb_rank(E, X));
  }
  return j;
}

Realization realize_from(const Flags& f) {
  Ordinal alpha = parse_ordinal(f.get("alpha"));
  Rat a = parse_rat(f.get("a", "1"));
  if (f.has("in-space")) return realize_in_space(parse_space(f.get("in-space")), alpha, a);
  if (f.has("plus")) return realize_successor_plus(alpha, a);
  return realize(alpha, a);
}

ordered_json cmd_realize(const Flags& f) {
  Realization r = realize_from(f);
  ordered_json j;
  j["alpha"] = f.get("alpha");
  j["a"] = f.get("a", "1");
  j["profile"] = profile_json_obj(r.profile);
  j["term"] = ordered_json::parse(term_to_json(r.term));
  return j;
}

ordered_json cmd_utable(const Flags& f) {
  TransfiniteProfile p;
  if (f.has("sequence")) {
    p = profile_closed_form(parse_candidate(f.get("sequence")));
  } else {
    p = realize_from(f).profile;
  }
  return profile_json_obj(p);
}

ordered_json cmd_verify(const Flags& f, const Budget& budget) {
  std::string lemma = f.get("lemma", "profile");
  ordered_json j;
  j["lemma"] = lemma;
  if (lemma == "powers") {
    long p = std::stol(f.get("p", "2"));
    Rat a = parse_rat(f.get("a", "1"));
    TermPtr H = renorm_power(base_step(a), p);
    TransfiniteProfile prof = profile_closed_form(H);
    VerifyReport rep = verify_profile(H, prof, witness_set(H, 2), budget);
    j["profile"] = profile_json_obj(prof);
    j["verify"] = verify_json_obj(rep);
  } else if (lemma == "union") {
    TermPtr H = f.has("sequence") ? parse_candidate(f.get("sequence"))
                                  : parse_candidate("union(base(1/n), from=1)");
    TransfiniteProfile prof = profile_closed_form(H);
    VerifyReport rep = verify_profile(H, prof, witness_set(H, 2), budget);
    j["profile"] = profile_json_obj(prof);
    j["verify"] = verify_json_obj(rep);
  } else if (lemma == "subadd") {
    TermPtr H = f.has("sequence") ? parse_candidate(f.get("sequence"))
                                  : realize(parse_ordinal(f.get("alpha-term", "2")), Rat(1)).term;
    Ordinal alpha = parse_ordinal(f.get("alpha", "1"));
    Ordinal beta = parse_ordinal(f.get("beta", "1"));
    Engine eng(budget);
    bool ok = eng.check_subadditivity(H, alpha, beta, witness_set(H, 2));
    j["holds"] = ok;
  } else if (lemma == "pointwise") {
    TermPtr H = f.has("sequence") ? parse_candidate(f.get("sequence")) : base_step(Rat(1));
    Engine eng(budget);
    bool ok = true;
    for (const auto& x : witness_set(H, 2)) ok = ok && eng.check_pointwise_bound(H, x);
    j["holds"] = ok;
  } else if (lemma == "profile") {
    Realization r = realize_from(f);
    VerifyReport rep = verify_profile(r.term, r.profile, witness_set(r.term, 2), budget);
    j["profile"] = profile_json_obj(r.profile);
    j["verify"] = verify_json_obj(rep);
  } else {
    throw DomainError("unknown lemma suite: " + lemma);
  }
  return j;
}

ordered_json cmd_simplex(const Flags& f) {
  ordered_json j;
  if (!f.bare.empty() && f.bare[0] == "demo-3-28") {
    Example328Report rep = example_3_28();
    j["alpha0_restricted"] = format_ordinal(rep.alpha0_restricted);
    j["alpha0_full"] = format_ordinal(rep.alpha0_full);
    j["u1_equals_u2_on_K"] = rep.u1_equals_u2_on_K;
    ordered_json rows = ordered_json::array();
    for (const auto& [name, u1, u2] : rep.u_table) {
      ordered_json e;
      e["element"] = name;
      e["u1"] = format_rat(u1);
      e["u2"] = format_rat(u2);
      rows.push_back(e);
    }
    j["u_table"] = rows;
    return j;
  }
  if (!f.bare.empty() && f.bare[0] == "probe") {
    SpacePtr E = parse_space(f.get("space"));
    auto res = s_of_k_probe(E, parse_gammas(f.get("gammas")));
    j["space"] = f.get("space");
    ordered_json rows = ordered_json::array();
    for (const auto& [g, ok] : res) {
      ordered_json e;
      e["gamma"] = format_ordinal(g);
      e["realized"] = ok;
      rows.push_back(e);
    }
    j["results"] = rows;
    return j;
  }
  throw DomainError("simplex expects a subcommand: demo-3-28 | probe");
}

const char* kUsage =
    "usage: tel <command> [flags]\n"
    "commands:\n"
    "  ordinal --expr E [--add E] [--nat-mul N] [--compare E] [--fundamental I]\n"
    "  rank    --space S [--point P] [--relative isolated|cofinite[:p;p...]]\n"
    "  realize --alpha A [--a R] [--plus] [--in-space S] [--out PATH]\n"
    "  utable  (--alpha A [--a R] [--plus] | --sequence L)\n"
    "  verify  --lemma powers|union|subadd|pointwise|profile [flags]\n"
    "  simplex demo-3-28 | probe --space S --gammas G,G,...\n"
    "common flags: --format json|tsv, --out PATH, --with-timing,\n"
    "  --max-depth N, --max-witnesses N, --timeout-ms N\n";

}  // namespace

std::string profile_to_json(const TransfiniteProfile& p) { return profile_json_obj(p).dump(); }

std::string profile_to_tsv(const TransfiniteProfile& p) {
  std::ostringstream out;
  out << "gamma\tnorm\tat_marked\n";
  for (const auto& b : p.breakpoints)
    out << format_ordinal(b.gamma) << '\t' << format_rat(b.norm) << '\t'
        << format_rat(b.at_marked) << '\n';
  return out.str();
}

std::string serialize_report(const RunReport& r, const std::string& format, bool with_timing) {
  if (format == "tsv") {
    // tabular payloads only: profile tables and probe rows
    ordered_json j = ordered_json::parse(r.results_json);
    std::ostringstream out;
    if (j.contains("breakpoints")) {
      out << "gamma\tnorm\tat_marked\n";
      for (const auto& b : j["breakpoints"])
        out << b["gamma"].get<std::string>() << '\t' << b["norm"].get<std::string>() << '\t'
            << b["at_marked"].get<std::string>() << '\n';
      return out.str();
    }
    if (j.contains("profile") && j["profile"].contains("breakpoints")) {
      out << "gamma\tnorm\tat_marked\n";
      for (const auto& b : j["profile"]["breakpoints"])
        out << b["gamma"].get<std::string>() << '\t' << b["norm"].get<std::string>() << '\t'
            << b["at_marked"].get<std::string>() << '\n';
      return out.str();
    }
    if (j.contains("results")) {
      out << "gamma\trealized\n";
      for (const auto& b : j["results"])
        out << b["gamma"].get<std::string>() << '\t' << (b["realized"].get<bool>() ? "1" : "0")
            << '\n';
      return out.str();
    }
    throw DomainError("tsv output is only defined for tabular payloads");
  }
  ordered_json j;
  j["schema"] = "tel-report/1";
  j["command"] = r.command;
  j["status"] = r.status;
  j["results"] = r.results_json.empty() ? ordered_json(nullptr)
                                        : ordered_json::parse(r.results_json);
  if (with_timing) j["timing_ms"] = r.timing_ms;
  return j.dump(2) + "\n";
}

RunReport dispatch(const std::vector<std::string>& argv) {
  RunReport rep;
  std::ostringstream echo;
  for (std::size_t i = 0; i < argv.size(); ++i) echo << (i ? " " : "") << argv[i];
  rep.command = echo.str();
  if (argv.empty()) {
    rep.status = "usage-error";
    rep.results_json = ordered_json{{"usage", kUsage}}.dump();
    rep.exit_code = 2;
    return rep;
  }
  const std::string& cmd = argv[0];
  Flags f = parse_flags(argv, 1);
  try {
    Budget budget = budget_from(f);
    ordered_json payload;
    if (cmd == "ordinal") {
      payload = cmd_ordinal(f);
    } else if (cmd == "rank") {
      payload = cmd_rank(f);
    } else if (cmd == "realize") {
      payload = cmd_realize(f);
    } else if (cmd == "utable") {
      payload = cmd_utable(f);
    } else if (cmd == "verify") {
      payload = cmd_verify(f, budget);
    } else if (cmd == "simplex") {
      payload = cmd_simplex(f);
    } else {
      rep.status = "usage-error";
      rep.results_json = ordered_json{{"usage", kUsage}, {"unknown", cmd}}.dump();
      rep.exit_code = 2;
      return rep;
    }
    rep.status = "ok";
    rep.results_json = payload.dump();
    rep.exit_code = 0;
    // any Unknown entries flip the status
    if (payload.contains("verify") && payload["verify"].contains("skipped")) {
      rep.status = "budget-exceeded";
      rep.exit_code = 4;
    }
    if (payload.contains("verify") && !payload["verify"]["all_match"].get<bool>()) {
      rep.status = "hypothesis-violation";
      rep.exit_code = 3;
    }
  } catch (const ParseError& e) {
    rep.status = "usage-error";
    rep.results_json = ordered_json{{"error", e.what()}, {"usage", kUsage}}.dump();
    rep.exit_code = 2;
  } catch (const HypothesisViolation& e) {
    rep.status = "hypothesis-violation";
    rep.results_json = ordered_json{{"error", e.what()}, {"hypothesis", e.hypothesis}}.dump();
    rep.exit_code = 3;
  } catch (const BudgetExceeded& e) {
    rep.status = "budget-exceeded";
    rep.results_json = ordered_json{{"error", e.what()}}.dump();
    rep.exit_code = 4;
  } catch (const std::exception& e) {
    rep.status = "usage-error";
    rep.results_json = ordered_json{{"error", e.what()}}.dump();
    rep.exit_code = 2;
  }
  return rep;
}

}  // namespace tel
