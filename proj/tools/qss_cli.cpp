/* Command line front end for the qss shared library.
 *
 * Every subcommand resolves its parameters (flags override an optional JSON
 * config file, which overrides built-in defaults), produces one artifact on
 * stdout or at --out, and writes a manifest describing the resolved run so
 * `qss replay --manifest <file>` can regenerate the artifact byte for byte.
 *
 * Exit codes mirror qss_status: 0 success, 2 invalid input, 3 solver or
 * internal failure. */
#include <CLI11.hpp>
#include <json.hpp>
#include <qss.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using nlohmann::json;

struct ApiError {
  qss_status status;
  std::string message;
};

struct CStr {
  char* p = nullptr;
  ~CStr() { qss_string_free(p); }
  std::string str() const { return p == nullptr ? std::string() : std::string(p); }
};

struct StateHandle {
  qss_state* p = nullptr;
  ~StateHandle() { qss_state_free(p); }
};

int status_exit_code(qss_status s) {
  if (s == QSS_OK) return 0;
  if (s == QSS_ERR_INVALID_ARGUMENT) return 2;
  return 3;
}

void check(qss_status s, const std::string& context) {
  if (s != QSS_OK) throw ApiError{s, context + ": " + qss_last_error()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ApiError{QSS_ERR_INVALID_ARGUMENT, "cannot read " + path};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ApiError{QSS_ERR_INVALID_ARGUMENT, "cannot write " + path};
  out << content;
  if (!out) throw ApiError{QSS_ERR_INTERNAL, "short write to " + path};
}

/* Shortest round-trip text for a JSON scalar, unquoted for strings. */
std::string cell(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

std::string scores_csv(const json& s) {
  std::ostringstream os;
  os << "metric,value\n";
  auto row = [&](const char* k, const json& v) { os << k << "," << cell(v) << "\n"; };
  if (s.contains("S")) {
    row("S", s["S"]);
    row("S_z0", s["S_z"][0]);
    row("S_z1", s["S_z"][1]);
  } else {
    row("R", s["R"]);
    row("R_scrt", s["R_scrt"]);
    row("R_ctrl", s["R_ctrl"]);
    row("R_scrt_z0", s["R_scrt_z"][0]);
    row("R_scrt_z1", s["R_scrt_z"][1]);
    row("R_ctrl_z0", s["R_ctrl_z"][0]);
    row("R_ctrl_z1", s["R_ctrl_z"][1]);
  }
  return os.str();
}

/* Flattens nested objects to dotted keys; arrays are left to the JSON form. */
void kv_rows(std::ostringstream& os, const std::string& prefix, const json& obj) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      kv_rows(os, key, *it);
    } else if (!it->is_array()) {
      os << key << "," << cell(*it) << "\n";
    }
  }
}

std::string kv_csv(const json& obj) {
  std::ostringstream os;
  os << "key,value\n";
  kv_rows(os, "", obj);
  return os.str();
}

json csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> header;
  json rows = json::array();
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (first) {
      header = cells;
      first = false;
      continue;
    }
    json row;
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) {
      const json parsed = json::parse(cells[i], nullptr, false);
      row[header[i]] = parsed.is_discarded() ? json(cells[i]) : parsed;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::string& xlabel, const std::string& ylabel) {
  const double w = 640.0, h = 480.0, margin = 60.0;
  double ymin = ys.front(), ymax = ys.front();
  for (double y : ys) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double xmin = xs.front(), xmax = xs.back();
  auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); };
  auto py = [&](double y) { return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin); };
  std::ostringstream os;
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
        "viewBox=\"0 0 640 480\">\n"
     << "  <rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
     << "  <line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\"" << w - margin
     << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n"
     << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
     << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n"
     << "  <text x=\"" << w / 2 << "\" y=\"" << h - margin / 3
     << "\" text-anchor=\"middle\" font-size=\"14\">" << xlabel << "</text>\n"
     << "  <text x=\"" << margin / 3 << "\" y=\"" << h / 2
     << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 " << margin / 3
     << " " << h / 2 << ")\">" << ylabel << "</text>\n"
     << "  <text x=\"" << margin << "\" y=\"" << h - margin + 16
     << "\" text-anchor=\"middle\" font-size=\"11\">" << xmin << "</text>\n"
     << "  <text x=\"" << w - margin << "\" y=\"" << h - margin + 16
     << "\" text-anchor=\"middle\" font-size=\"11\">" << xmax << "</text>\n"
     << "  <text x=\"" << margin - 8 << "\" y=\"" << h - margin + 4
     << "\" text-anchor=\"end\" font-size=\"11\">" << ymin << "</text>\n"
     << "  <text x=\"" << margin - 8 << "\" y=\"" << margin + 4
     << "\" text-anchor=\"end\" font-size=\"11\">" << ymax << "</text>\n"
     << "  <polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << " ";
    os << px(xs[i]) << "," << py(ys[i]);
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

struct Produced {
  std::string artifact;
  std::vector<std::pair<std::string, std::string>> extra;  // path, content
};

Produced produce(const std::string& sub, const json& p, const std::string& format) {
  const auto str = [&](const char* k) { return p.at(k).get<std::string>(); };
  const auto num = [&](const char* k) { return p.at(k).get<double>(); };

  if (sub == "eval") {
    StateHandle state;
    if (p.contains("state_json")) {
      check(qss_state_from_json(str("state_json").c_str(), &state.p), "parse state");
    } else {
      check(qss_state_family(str("family").c_str(), num("v"), num("theta"), &state.p),
            "build state");
    }
    CStr out;
    check(qss_eval(str("task").c_str(), state.p, &out.p), "evaluate");
    const json doc = json::parse(out.str());
    if (format == "json") return {doc.dump(2) + "\n", {}};
    return {scores_csv(doc["scores"]), {}};
  }

  if (sub == "sweep") {
    const std::string task = str("task"), family = str("family");
    const bool theta_sweep = family == "pure";
    const int points = p.at("points").get<int>();
    const double lo = num("min"), hi = num("max");
    std::vector<double> xs, ys;
    json rows = json::array();
    std::ostringstream csv;
    const bool det = task == "deterministic";
    csv << (theta_sweep ? "theta" : "v") << (det ? ",S,S_z0,S_z1" : ",R,R_scrt,R_ctrl")
        << "\n";
    for (int i = 0; i < points; ++i) {
      const double x = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
      CStr out;
      check(qss_closed_form(task.c_str(), family.c_str(), theta_sweep ? 1.0 : x,
                            theta_sweep ? x : num("theta"), &out.p),
            "closed form");
      const json s = json::parse(out.str());
      json row;
      row[theta_sweep ? "theta" : "v"] = x;
      if (det) {
        row["S"] = s["S"];
        row["S_z0"] = s["S_z"][0];
        row["S_z1"] = s["S_z"][1];
        csv << json(x).dump() << "," << cell(s["S"]) << "," << cell(s["S_z"][0]) << ","
            << cell(s["S_z"][1]) << "\n";
        ys.push_back(s["S"].get<double>());
      } else {
        row["R"] = s["R"];
        row["R_scrt"] = s["R_scrt"];
        row["R_ctrl"] = s["R_ctrl"];
        csv << json(x).dump() << "," << cell(s["R"]) << "," << cell(s["R_scrt"]) << ","
            << cell(s["R_ctrl"]) << "\n";
        ys.push_back(s["R"].get<double>());
      }
      xs.push_back(x);
      rows.push_back(row);
    }
    Produced result{format == "json" ? rows.dump(2) + "\n" : csv.str(), {}};
    if (p.contains("svg")) {
      result.extra.emplace_back(
          str("svg"), sweep_svg(xs, ys, theta_sweep ? "theta" : "visibility",
                                det ? "S" : "R"));
    }
    return result;
  }

  if (sub == "threshold") {
    double t = 0.0;
    check(qss_threshold(str("task").c_str(), str("family").c_str(), num("theta"), &t),
          "threshold");
    json doc{{"task", str("task")}, {"family", str("family")}, {"theta", num("theta")},
             {"threshold", t}};
    if (format == "json") return {doc.dump(2) + "\n", {}};
    std::ostringstream os;
    os << "task,family,theta,threshold\n"
       << str("task") << "," << str("family") << "," << json(num("theta")).dump() << ","
       << json(t).dump() << "\n";
    return {os.str(), {}};
  }

  if (sub == "classical") {
    CStr out;
    check(qss_classical_best(str("task").c_str(), &out.p), "classical search");
    const json doc = json::parse(out.str());
    if (format == "json") return {doc.dump(2) + "\n", {}};
    return {kv_csv(doc), {}};
  }

  if (sub == "frontier") {
    CStr out;
    check(qss_classical_frontier(&out.p), "frontier");
    if (format == "json") return {csv_to_json(out.str()).dump(2) + "\n", {}};
    return {out.str(), {}};
  }

  if (sub == "seesaw") {
    CStr out;
    check(qss_seesaw(str("task").c_str(), p.at("restarts").get<int>(),
                     p.at("seed").get<std::uint64_t>(), &out.p),
          "seesaw");
    const json doc = json::parse(out.str());
    if (format == "json") return {doc.dump(2) + "\n", {}};
    std::ostringstream os;
    os << "restart,value,sweeps\n";
    for (std::size_t i = 0; i < doc["per_restart"].size(); ++i) {
      os << i << "," << cell(doc["per_restart"][i]) << "," << cell(doc["sweeps"][i])
         << "\n";
    }
    return {os.str(), {}};
  }

  if (sub == "certify") {
    const int level = p.at("level").get<int>();
    json doc;
    if (p.at("max_visibility").get<bool>()) {
      double cv = 0.0;
      check(qss_certified_visibility(str("family").c_str(), num("theta"), level, &cv),
            "certified visibility");
      doc = json{{"family", str("family")}, {"theta", num("theta")}, {"level", level},
                 {"certified_visibility", cv}};
    } else {
      StateHandle state;
      check(qss_state_family(str("family").c_str(), num("v"), num("theta"), &state.p),
            "build state");
      CStr out;
      check(qss_certify(state.p, level, &out.p), "certify");
      doc = json::parse(out.str());
    }
    if (format == "json") return {doc.dump(2) + "\n", {}};
    return {kv_csv(doc), {}};
  }

  if (sub == "experiment") {
    CStr summary, counts;
    check(qss_experiment(str("task").c_str(), str("family").c_str(), num("v"),
                         num("theta"), p.at("events").get<long long>(),
                         p.at("seed").get<std::uint64_t>(),
                         p.at("infinite").get<bool>() ? 1 : 0, &summary.p, &counts.p),
          "experiment");
    if (format == "json") return {summary.str() + "\n", {}};
    return {counts.str(), {}};
  }

  if (sub == "tomography") {
    CStr summary, counts;
    check(qss_tomography(str("family").c_str(), num("v"), num("theta"),
                         p.at("events").get<long long>(),
                         p.at("seed").get<std::uint64_t>(), &summary.p, &counts.p),
          "tomography");
    if (format == "json") return {summary.str() + "\n", {}};
    return {counts.str(), {}};
  }

  if (sub == "verify-tables") {
    CStr j, c;
    check(qss_verify_tables(&j.p, &c.p), "verify tables");
    if (format == "json") return {j.str() + "\n", {}};
    return {c.str(), {}};
  }

  if (sub == "reproduce") {
    const std::string table = p.value("table", std::string());
    const auto seed = p.at("seed").get<std::uint64_t>();
    if (!table.empty()) {
      CStr j, c;
      check(qss_reproduce(table.c_str(), seed, &j.p, &c.p), "reproduce");
      if (format == "json") return {j.str() + "\n", {}};
      return {c.str(), {}};
    }
    CStr all;
    check(qss_reproduce(nullptr, seed, &all.p, nullptr), "reproduce");
    if (format == "json") return {all.str() + "\n", {}};
    const json tables = json::parse(all.str());
    std::ostringstream os;
    bool first = true;
    for (const json& t : tables) {
      CStr j, c;
      check(qss_reproduce(t["name"].get<std::string>().c_str(), seed, &j.p, &c.p),
            "reproduce");
      std::istringstream in(c.str());
      std::string line;
      bool header = true;
      while (std::getline(in, line)) {
        if (header && !first) {
          header = false;
          continue;
        }
        header = false;
        os << line << "\n";
      }
      first = false;
    }
    return {os.str(), {}};
  }

  throw ApiError{QSS_ERR_INVALID_ARGUMENT, "unknown subcommand " + sub};
}

int resolve_threads() {
  const char* env = std::getenv("QSS_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1) {
    throw ApiError{QSS_ERR_INVALID_ARGUMENT,
                   "QSS_THREADS must be a positive integer, got '" + std::string(env) +
                       "'"};
  }
  return static_cast<int>(n);
}

/* Replaces a parsed flag value with the config entry when the flag was not
 * given on the command line. Config keys are long option names without the
 * leading dashes. */
template <typename T>
void from_config(const CLI::App* cmd, const json& cfg, const std::string& flag, T& var) {
  if (cmd->count("--" + flag) == 0 && cfg.contains(flag)) {
    var = cfg.at(flag).get<T>();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Secret sharing with weakly entangled states: exact evaluation, classical and "
      "variational baselines, steering certificates, and a simulated photonic "
      "experiment.\n"
      "Every run writes a manifest next to its artifact; `replay` regenerates the "
      "artifact from a manifest byte for byte. QSS_THREADS caps worker threads "
      "(computations are currently single threaded; the value is validated and "
      "recorded)."};
  app.set_version_flag("--version", std::string(qss_version()));
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON object with defaults for subcommand flags (keys are long "
                 "option names without dashes)");

  std::string task = "deterministic", family = "isotropic", format = "csv";
  std::string out, manifest_path, table, svg_path, state_path, replay_manifest;
  double v = 1.0, theta = 0.0, sweep_min = 0.0, sweep_max = 0.0;
  int level = 1, points = 101, restarts = 100;
  long long events = 100000;
  std::uint64_t seed = 1;
  bool infinite = false, max_visibility = false;

  const auto add_task = [&](CLI::App* c) {
    c->add_option("--task", task, "deterministic or stochastic");
  };
  const auto add_family = [&](CLI::App* c) {
    c->add_option("--family", family, "isotropic, partial or pure");
  };
  const auto add_v = [&](CLI::App* c) { c->add_option("--v", v, "visibility in [0,1]"); };
  const auto add_theta = [&](CLI::App* c) {
    c->add_option("--theta", theta, "entanglement angle in (0, pi/4]");
  };
  const auto add_seed = [&](CLI::App* c) { c->add_option("--seed", seed, "RNG seed"); };
  const auto add_io = [&](CLI::App* c) {
    c->add_option("--out", out, "write the artifact here instead of stdout");
    c->add_option("--format", format, "csv or json (csv is canonical)")
        ->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--manifest", manifest_path,
                  "manifest path (default: <out>.manifest.json, or manifest.json "
                  "for stdout runs)");
  };

  CLI::App* eval = app.add_subcommand("eval", "exact scores and behavior for a state");
  add_task(eval), add_family(eval), add_v(eval), add_theta(eval), add_io(eval);
  eval->add_option("--state", state_path, "JSON density matrix file (overrides family)");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "closed form scores over a parameter grid (v, or theta for pure)");
  add_task(sweep), add_family(sweep), add_theta(sweep), add_io(sweep);
  sweep->add_option("--points", points, "grid size")->check(CLI::PositiveNumber);
  sweep->add_option("--min", sweep_min, "grid start (default 0, or 0.01 for pure)");
  sweep->add_option("--max", sweep_max, "grid end (default 1, or pi/4 for pure)");
  sweep->add_option("--svg", svg_path, "also write a line plot to this path");

  CLI::App* threshold = app.add_subcommand(
      "threshold", "critical visibility where the task beats every classical protocol");
  add_task(threshold), add_family(threshold), add_theta(threshold), add_io(threshold);

  CLI::App* classical =
      app.add_subcommand("classical", "exhaustive best classical strategy");
  add_task(classical), add_io(classical);

  CLI::App* frontier = app.add_subcommand(
      "frontier", "Pareto frontier of classical secret and control rates");
  add_io(frontier);

  CLI::App* seesaw = app.add_subcommand(
      "seesaw", "alternating variational optimization over qubit protocols");
  add_task(seesaw), add_seed(seesaw), add_io(seesaw);
  seesaw->add_option("--restarts", restarts, "random restarts")
      ->check(CLI::PositiveNumber);

  CLI::App* certify = app.add_subcommand(
      "certify", "steering certificate for a state, or --max-visibility for a family");
  add_family(certify), add_v(certify), add_theta(certify), add_io(certify);
  certify->add_option("--level", level, "polytope refinement level 1..3")
      ->check(CLI::Range(1, 3));
  certify->add_flag("--max-visibility", max_visibility,
                    "largest certified steerable visibility for the family");

  CLI::App* experiment = app.add_subcommand(
      "experiment", "simulated photonic run with plate jitter and shot noise");
  add_task(experiment), add_family(experiment), add_v(experiment),
      add_theta(experiment), add_seed(experiment), add_io(experiment);
  experiment->add_option("--events", events, "total detection events")
      ->check(CLI::PositiveNumber);
  experiment->add_flag("--infinite", infinite,
                       "skip sampling and report exact ideal-plate probabilities");

  CLI::App* tomography = app.add_subcommand(
      "tomography", "simulated state tomography with linear inversion");
  add_family(tomography), add_v(tomography), add_theta(tomography), add_seed(tomography),
      add_io(tomography);
  tomography->add_option("--events", events, "events per measurement setting")
      ->check(CLI::PositiveNumber);

  CLI::App* verify_tables = app.add_subcommand(
      "verify-tables", "check the published optical settings tables row by row");
  add_io(verify_tables);

  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "published theory values against freshly computed ones");
  add_seed(reproduce), add_io(reproduce);
  reproduce->add_option("--table", table, "single table name (default: all tables)");

  CLI::App* replay =
      app.add_subcommand("replay", "regenerate an artifact from a run manifest");
  replay->add_option("--manifest", replay_manifest, "manifest written by a prior run")
      ->required();
  replay->add_option("--out", out, "write the artifact here instead of the recorded path");

  for (CLI::App* c : app.get_subcommands(
           [](const CLI::App*) { return true; })) {
    c->fallthrough();  // lets --config appear after the subcommand name
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* cmd = nullptr;
  for (CLI::App* c : app.get_subcommands()) cmd = c;
  if (cmd == nullptr) {
    std::cout << app.help();
    return 0;
  }

  try {
    const int threads = resolve_threads();

    json cfg = json::object();
    if (!config_path.empty()) {
      cfg = json::parse(read_file(config_path), nullptr, false);
      if (cfg.is_discarded() || !cfg.is_object()) {
        throw ApiError{QSS_ERR_INVALID_ARGUMENT,
                       config_path + " is not a JSON object"};
      }
    }

    const std::string sub = cmd->get_name();

    if (sub == "replay") {
      const json m = json::parse(read_file(replay_manifest), nullptr, false);
      if (m.is_discarded() || !m.contains("subcommand") || !m.contains("params")) {
        throw ApiError{QSS_ERR_INVALID_ARGUMENT,
                       replay_manifest + " is not a run manifest"};
      }
      const Produced made =
          produce(m["subcommand"].get<std::string>(), m["params"],
                  m.value("format", std::string("csv")));
      std::string target = out;
      if (target.empty() && m.contains("outputs") && !m["outputs"].empty()) {
        target = m["outputs"][0].get<std::string>();
      }
      if (target.empty()) {
        std::cout << made.artifact;
      } else {
        write_file(target, made.artifact);
      }
      return 0;
    }

    for (const char* key : {"task", "family", "format", "out", "manifest", "table",
                            "svg", "state"}) {
      // Config-file defaults for string flags, applied only where the
      // subcommand defines the flag.
      if (cmd->get_option_no_throw("--" + std::string(key)) == nullptr) continue;
      if (std::string(key) == "task") from_config(cmd, cfg, "task", task);
      if (std::string(key) == "family") from_config(cmd, cfg, "family", family);
      if (std::string(key) == "format") from_config(cmd, cfg, "format", format);
      if (std::string(key) == "out") from_config(cmd, cfg, "out", out);
      if (std::string(key) == "manifest") from_config(cmd, cfg, "manifest", manifest_path);
      if (std::string(key) == "table") from_config(cmd, cfg, "table", table);
      if (std::string(key) == "svg") from_config(cmd, cfg, "svg", svg_path);
      if (std::string(key) == "state") from_config(cmd, cfg, "state", state_path);
    }
    if (cmd->get_option_no_throw("--v")) from_config(cmd, cfg, "v", v);
    if (cmd->get_option_no_throw("--theta")) from_config(cmd, cfg, "theta", theta);
    if (cmd->get_option_no_throw("--level")) from_config(cmd, cfg, "level", level);
    if (cmd->get_option_no_throw("--points")) from_config(cmd, cfg, "points", points);
    if (cmd->get_option_no_throw("--restarts")) from_config(cmd, cfg, "restarts", restarts);
    if (cmd->get_option_no_throw("--events")) from_config(cmd, cfg, "events", events);
    if (cmd->get_option_no_throw("--seed")) from_config(cmd, cfg, "seed", seed);
    if (cmd->get_option_no_throw("--min")) from_config(cmd, cfg, "min", sweep_min);
    if (cmd->get_option_no_throw("--max")) from_config(cmd, cfg, "max", sweep_max);

    json params = json::object();
    if (sub == "eval") {
      params = {{"task", task}, {"family", family}, {"v", v}, {"theta", theta}};
      if (!state_path.empty()) params["state_json"] = read_file(state_path);
    } else if (sub == "sweep") {
      const bool pure = family == "pure";
      if (cmd->count("--min") == 0 && !cfg.contains("min")) sweep_min = pure ? 0.01 : 0.0;
      if (cmd->count("--max") == 0 && !cfg.contains("max"))
        sweep_max = pure ? M_PI / 4.0 : 1.0;
      params = {{"task", task}, {"family", family}, {"theta", theta},
                {"points", points}, {"min", sweep_min}, {"max", sweep_max}};
      if (!svg_path.empty()) params["svg"] = svg_path;
    } else if (sub == "threshold") {
      params = {{"task", task}, {"family", family}, {"theta", theta}};
    } else if (sub == "classical") {
      params = {{"task", task}};
    } else if (sub == "frontier" || sub == "verify-tables") {
      params = json::object();
    } else if (sub == "seesaw") {
      params = {{"task", task}, {"restarts", restarts}, {"seed", seed}};
    } else if (sub == "certify") {
      params = {{"family", family}, {"v", v}, {"theta", theta}, {"level", level},
                {"max_visibility", max_visibility}};
    } else if (sub == "experiment") {
      params = {{"task", task}, {"family", family}, {"v", v}, {"theta", theta},
                {"events", events}, {"seed", seed}, {"infinite", infinite}};
    } else if (sub == "tomography") {
      params = {{"family", family}, {"v", v}, {"theta", theta}, {"events", events},
                {"seed", seed}};
    } else if (sub == "reproduce") {
      params = {{"table", table}, {"seed", seed}};
    }

    const auto t0 = std::chrono::steady_clock::now();
    const Produced made = produce(sub, params, format);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (out.empty()) {
      std::cout << made.artifact;
    } else {
      write_file(out, made.artifact);
    }
    for (const auto& [path, content] : made.extra) write_file(path, content);

    json manifest{{"version", qss_version()}, {"subcommand", sub}, {"format", format},
                  {"params", params}, {"outputs", json::array()}, {"threads", threads},
                  {"wall_time_s", wall}};
    if (!out.empty()) manifest["outputs"].push_back(out);
    for (const auto& [path, content] : made.extra) manifest["outputs"].push_back(path);
    const std::string mpath = !manifest_path.empty()
                                  ? manifest_path
                                  : (!out.empty() ? out + ".manifest.json"
                                                  : std::string("manifest.json"));
    write_file(mpath, manifest.dump(2) + "\n");
    return 0;
  } catch (const ApiError& e) {
    std::cerr << "qss: " << e.message << "\n";
    return status_exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "qss: " << e.what() << "\n";
    return 3;
  }
}
