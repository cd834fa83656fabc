#include "tri/cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "tri/algebra/json.hpp"
#include "tri/cartier.hpp"
#include "tri/error.hpp"
#include "tri/moduli.hpp"
#include "tri/search.hpp"
#include "tri/zeta.hpp"

namespace tri::cli {

using nlohmann::json;

namespace {

struct Globals {
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 42;
  std::uint64_t budget = search::kDefaultBudget;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  int k_max = 6;
};

struct Result {
  json report;
  std::optional<std::string> csv;  // set when the report is tabular and csv was asked for
  int code = kOk;
};

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Reads a JSON input from a path or "-" (stdin); records its digest.
json read_input(const std::string& path, std::map<std::string, std::string>& digests) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  digests[path] = sha256_hex(text);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

json type_to_json(const moduli::InertiaType& t) {
  json counts = json::object();
  for (int h = 1; h < t.l(); ++h) counts[std::to_string(h)] = t.count(h);
  return {{"l", t.l()}, {"counts", counts}};
}

json profile_to_json(const moduli::PRankProfile& pr) {
  return {{"p", pr.p}, {"e", pr.e}, {"epsilon", pr.epsilon}, {"bound", pr.bound}, {"orbits", pr.orbits}};
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  const bool prime = m.field().degree() == 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(prime ? json(m.at(i, j).raw()) : algebra::coefficient_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json cartier_report(const cartier::TriellipticCurve& c) {
  const auto m = cartier::cartier_matrix(c);
  return {{"g", c.genus},
          {"r", c.r},
          {"s", c.s},
          {"prank", cartier::prank_cartier(m)},
          {"superspecial", cartier::is_superspecial(m)},
          {"matrix", matrix_to_json(m.entries)}};
}

json zeta_report(const zeta::CyclicCover& c, unsigned workers, bool with_audit, int& code) {
  const auto L = zeta::l_polynomial(c, workers);
  json j{{"g", L.genus},
         {"q", L.q},
         {"counts", L.counts},
         {"L", L.coeffs},
         {"prank", zeta::prank_from_l_polynomial(L, c.field->characteristic())}};
  if (with_audit) {
    const auto a = zeta::audit(c, L, workers);
    j["audit"] = {{"functional_equation_residual", a.functional_equation_residual},
                  {"newton_roundtrip", a.newton_roundtrip},
                  {"weil_bounds", a.weil_bounds},
                  {"predicted_next", a.predicted_next ? json(*a.predicted_next) : json(nullptr)},
                  {"counted_next", a.counted_next ? json(*a.counted_next) : json(nullptr)},
                  {"ok", a.ok()}};
    if (!a.ok()) code = kInconsistent;
  }
  return j;
}

// A cover JSON carries "l"; otherwise the input is a trielliptic curve.
zeta::CyclicCover cover_from_input(const json& j) {
  if (j.is_object() && j.contains("l")) return zeta::cover_from_json(j);
  return zeta::from_trielliptic(cartier::curve_from_json(j));
}

moduli::InertiaType type_from_counts(int l, const std::vector<int>& counts) {
  if (static_cast<int>(counts.size()) != l - 1)
    throw DomainError("--counts needs l - 1 = " + std::to_string(l - 1) + " entries");
  return moduli::InertiaType(l, counts);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DomainError("cannot write " + path);
  f << text;
}

void append_line(const std::string& path, const std::string& line) {
  std::ofstream f(path, std::ios::binary | std::ios::app);
  if (!f) throw DomainError("cannot write " + path);
  f << line << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = utc_now();

  CLI::App app{"p-ranks of trielliptic and cyclic covers of the projective line", kToolName};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.set_config("--config", "", "key=value file setting defaults for the global options");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", g.out, "write the report here; a manifest line goes to PATH.manifest.jsonl");
  app.add_option("--seed", g.seed, "PRNG seed")->capture_default_str();
  app.add_option("--budget", g.budget, "configurations per field before sampling")->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads for scan and search")->check(CLI::PositiveNumber);
  app.add_option("--kmax", g.k_max, "largest extension degree searched")->capture_default_str();

  std::map<std::string, std::string> digests;
  std::function<Result()> action;

  // prank
  std::string method = "both", curve_path;
  auto* prank = app.add_subcommand("prank", "p-rank of a curve by Cartier matrix, point counting or both");
  prank->add_option("--method", method)->check(CLI::IsMember({"cartier", "zeta", "both"}))->capture_default_str();
  prank->add_option("--curve", curve_path, "curve JSON path, or - for stdin")->required();
  prank->callback([&] {
    action = [&] {
      Result res;
      const json in = read_input(curve_path, digests);
      if (method == "zeta") {
        res.report = zeta_report(cover_from_input(in), 1, false, res.code);
        return res;
      }
      const auto curve = cartier::curve_from_json(in);
      res.report = cartier_report(curve);
      if (method == "both") {
        const auto z = zeta_report(zeta::from_trielliptic(curve), 1, false, res.code);
        res.report["prank_cartier"] = res.report["prank"];
        res.report["prank_zeta"] = z["prank"];
        res.report["L"] = z["L"];
        res.report["counts"] = z["counts"];
        res.report["agree"] = z["prank"] == res.report["prank"];
        res.report.erase("prank");
        if (!res.report["agree"].get<bool>()) res.code = kInconsistent;
      }
      return res;
    };
  });

  // zeta
  auto* zeta_cmd = app.add_subcommand("zeta", "L-polynomial of a cyclic cover with its self-consistency audit");
  zeta_cmd->add_option("--curve", curve_path, "cover or trielliptic curve JSON path, or - for stdin")->required();
  zeta_cmd->callback([&] {
    action = [&] {
      Result res;
      res.report = zeta_report(cover_from_input(read_input(curve_path, digests)), 1, true, res.code);
      return res;
    };
  });

  // moduli commands
  int l = 3, genus = 0, p = 0, f = 0, index = 1;
  std::vector<int> counts;
  std::string kind = "delta";
  auto* enumerate = app.add_subcommand("enumerate", "inertia types of a genus, with signatures and p-rank bounds");
  enumerate->add_option("--l", l)->capture_default_str();
  enumerate->add_option("--g", genus)->required();
  enumerate->add_option("--p", p, "add e, the p-rank bound and the admissible p-ranks");
  enumerate->callback([&] {
    action = [&] {
      Result res;
      res.report = json::array();
      for (const auto& t : moduli::enumerate_inertia_types(l, genus)) {
        json row{{"type", type_to_json(t)}, {"g", moduli::genus_from_inertia(t)}, {"n", t.n()},
                 {"signature", moduli::signature_from_inertia(t).dims}};
        if (p != 0) {
          row["profile"] = profile_to_json(moduli::prank_profile(p, t));
          json adm = json::array();
          for (int v = 0; v <= moduli::genus_from_inertia(t); ++v)
            if (moduli::prank_admissible(p, t, v)) adm.push_back(v);
          row["admissible"] = adm;
        }
        res.report.push_back(std::move(row));
      }
      return res;
    };
  });

  auto* bound = app.add_subcommand("bound", "p-rank bound of an inertia type");
  bound->add_option("--l", l)->capture_default_str();
  bound->add_option("--p", p)->required();
  bound->add_option("--counts", counts, "multiplicities of the generators 1..l-1")->delimiter(',')->required();
  bound->callback([&] {
    action = [&] {
      Result res;
      const auto t = type_from_counts(l, counts);
      res.report = profile_to_json(moduli::prank_profile(p, t));
      res.report["type"] = type_to_json(t);
      res.report["g"] = moduli::genus_from_inertia(t);
      res.report["signature"] = moduli::signature_from_inertia(t).dims;
      return res;
    };
  });

  auto* strata = app.add_subcommand("strata", "p-rank pairs of the two components of a boundary stratum");
  strata->add_option("--i", index, "genus of the first component")->required();
  strata->add_option("--g", genus)->required();
  strata->add_option("--f", f)->required();
  strata->add_option("--l", l)->capture_default_str();
  strata->add_option("--p", p)->required();
  strata->add_option("--kind", kind)->check(CLI::IsMember({"delta", "xi"}))->capture_default_str();
  strata->callback([&] {
    action = [&] {
      Result res;
      res.report = json::array();
      for (auto [f1, f2] : moduli::strata_pairs(index, genus, f, l, p,
                                                kind == "xi" ? moduli::BoundaryKind::Xi : moduli::BoundaryKind::Delta))
        res.report.push_back({f1, f2});
      return res;
    };
  });

  auto* dim = app.add_subcommand("dim", "dimension bounds of a p-rank stratum");
  dim->add_option("--l", l)->capture_default_str();
  dim->add_option("--p", p)->required();
  dim->add_option("--counts", counts)->delimiter(',')->required();
  dim->add_option("--f", f)->required();
  dim->callback([&] {
    action = [&] {
      Result res;
      const auto b = moduli::stratum_dim_bounds(p, type_from_counts(l, counts), f);
      res.report = {{"lower", b.lower}, {"ambient", b.ambient}};
      return res;
    };
  });

  // search commands
  int k = 1, d1 = 2, d2 = 2, r = 1, s = 1;
  bool dedupe = false, no_zeta = false;
  auto* scan = app.add_subcommand("scan", "exhaustive scan of split trielliptic curves over F_{p^k}");
  scan->add_option("--p", p)->required();
  scan->add_option("--k", k)->capture_default_str();
  scan->add_option("--d1", d1)->capture_default_str();
  scan->add_option("--d2", d2)->capture_default_str();
  scan->add_flag("--dedupe", dedupe, "one curve per affine orbit");
  scan->add_flag("--no-zeta", no_zeta, "skip the point-count comparison");
  scan->callback([&] {
    action = [&] {
      Result res;
      search::ScanOptions so;
      so.dedupe = dedupe;
      so.budget = g.budget;
      so.workers = g.workers;
      so.zeta = !no_zeta;
      const auto rep = search::exhaustive_scan(static_cast<std::uint32_t>(p), k, d1, d2, so);
      res.report = search::scan_to_json(rep);
      if (g.format == "csv") res.csv = search::scan_to_csv({rep});
      if (!rep.clean()) res.code = kInconsistent;
      return res;
    };
  });

  auto* search_cmd = app.add_subcommand("search", "witness of a signature and p-rank");
  search_cmd->add_option("--p", p)->required();
  search_cmd->add_option("--r", r)->required();
  search_cmd->add_option("--s", s)->required();
  search_cmd->add_option("--f", f)->required();
  search_cmd->callback([&] {
    action = [&] {
      Result res;
      const auto w = search::find_witness(static_cast<std::uint32_t>(p), r, s, f, g.k_max, g.budget, g.seed, g.workers);
      res.report = search::witness_search_to_json(w);
      return res;
    };
  });

  std::vector<std::uint32_t> primes;
  int g_max = 3;
  auto* verify = app.add_subcommand("verify", "desk-scale verification report");
  verify->add_option("--p", primes, "primes, comma separated")->delimiter(',')->required();
  verify->add_option("--gmax", g_max)->capture_default_str();
  verify->callback([&] {
    action = [&] {
      Result res;
      search::VerifyOptions vo;
      vo.budget = g.budget;
      vo.seed = g.seed;
      vo.k_max = g.k_max;
      vo.workers = g.workers;
      res.report = search::verify_suite(primes, g_max, vo);
      if (!res.report["pass"].get<bool>()) {
        // invariant claims carry no "required" flag; unmet witness searches are ordinary failures
        res.code = kRejected;
        for (const auto& c : res.report["claims"])
          if (!c["pass"].get<bool>() && !(c.contains("detail") && c["detail"].contains("required"))) res.code = kInconsistent;
      }
      return res;
    };
  });

  std::vector<std::string> argv_store{kToolName};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << kToolName << ": " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  Result res;
  try {
    if (g.format == "csv" && app.got_subcommand("scan") == false)
      throw DomainError("--format csv is only available for scan");
    res = action();
  } catch (const DomainError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kRejected;
  } catch (const ConsistencyError& e) {
    err << kToolName << ": internal consistency failure: " << e.what() << '\n';
    return kInconsistent;
  } catch (const std::exception& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kInconsistent;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  json config{{"format", g.format}, {"seed", g.seed}, {"budget", g.budget}, {"workers", g.workers}, {"kmax", g.k_max}};
  json inputs = json::object();
  for (const auto& [path, digest] : digests) inputs[path] = digest;
  // identical invocations share a run id, so reports stay byte-stable
  const std::string run_id = sha256_hex(json{{"args", args}, {"config", config}, {"inputs", inputs}}.dump()).substr(0, 16);

  try {
    if (g.out.empty()) {
      if (res.csv)
        out << *res.csv;
      else
        out << res.report.dump(2) << '\n';
    } else {
      const std::string manifest_path = g.out + ".manifest.jsonl";
      if (res.csv) {
        write_text(g.out, *res.csv);
      } else {
        json doc = res.report.is_object() ? res.report : json{{"result", res.report}};
        doc["manifest"] = {{"file", manifest_path.substr(manifest_path.find_last_of('/') + 1)}, {"run", run_id}};
        write_text(g.out, doc.dump(2) + '\n');
      }
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      json m{{"run", run_id},
             {"tool", kToolName},
             {"version", kVersion},
             {"command", command},
             {"argv", args},
             {"config", config},
             {"seed", g.seed},
             {"inputs", inputs},
             {"started", started_at},
             {"finished", utc_now()},
             {"elapsed_seconds", elapsed},
             {"exit_code", res.code},
             {"output", g.out}};
      append_line(manifest_path, m.dump());
    }
  } catch (const DomainError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kRejected;
  }
  if (res.code == kInconsistent) err << kToolName << ": a mathematical invariant failed; see the report\n";
  return res.code;
}

}  // namespace tri::cli
