#include "core/reproduce.hpp"

#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "core/optics.hpp"
#include "core/protocol.hpp"
#include "core/rng.hpp"

namespace qss {
namespace {

constexpr double kThetaStar = 0.2356;

const char* kScoreNote =
    "computed column evaluates the canonical protocol exactly; the "
    "experimental column is context from the tabletop run, not a target";

ReproRow row(const std::string& label, double published, double computed,
             double experimental, double experimental_err) {
  return {label, published, computed, computed - published, experimental, experimental_err};
}

ReproTable det_table(const std::string& name, const std::string& title,
                     const DensityMatrix& rho, const double published[3],
                     const double exp_val[3], const double exp_err[3]) {
  const Scores s = score(evaluate_canonical(Task::Deterministic, rho));
  ReproTable t{name, title, kScoreNote, {}};
  t.rows.push_back(row("S_z0", published[0], s.per_z[0], exp_val[0], exp_err[0]));
  t.rows.push_back(row("S_z1", published[1], s.per_z[1], exp_val[1], exp_err[1]));
  t.rows.push_back(row("S", published[2], s.total, exp_val[2], exp_err[2]));
  return t;
}

ReproTable stoch_table(const std::string& name, const std::string& title,
                       const DensityMatrix& rho, const double published[5],
                       const double exp_val[5], const double exp_err[5]) {
  const Scores s = score(evaluate_canonical(Task::Stochastic, rho));
  const double computed[5] = {s.control_z[0], s.secret_z[0], s.control_z[1], s.secret_z[1],
                              s.total};
  const char* labels[5] = {"R_ctrl_z0", "R_scrt_z0", "R_ctrl_z1", "R_scrt_z1", "R"};
  ReproTable t{name, title, kScoreNote, {}};
  for (int i = 0; i < 5; ++i)
    t.rows.push_back(row(labels[i], published[i], computed[i], exp_val[i], exp_err[i]));
  return t;
}

ReproTable tomo_table(uint64_t seed) {
  ReproTable t{"tomo-fidelity",
               "Tomography fidelity against the ideal isotropic state",
               "computed column simulates counting noise only (each basis state "
               "measured at 1400 events per setting and recombined; the v = 1 row "
               "uses the high-rate acquisition), so it can sit above the record",
               {}};
  struct Entry { double v; double fid; double err; };
  const Entry entries[] = {{0.40, 0.9982, 0.0004}, {0.41, 0.9982, 0.0004},
                           {0.42, 0.9983, 0.0004}, {0.43, 0.9983, 0.0004},
                           {0.44, 0.9983, 0.0004}, {0.45, 0.9983, 0.0004},
                           {0.46, 0.9983, 0.0004}, {0.47, 0.9983, 0.0004},
                           {0.48, 0.9983, 0.0004}, {0.49, 0.9983, 0.0004},
                           {0.50, 0.9983, 0.0004}, {1.00, 0.9947, 0.0009}};
  int index = 0;
  for (const auto& e : entries) {
    const uint64_t row_seed = Rng::substream(seed, static_cast<uint64_t>(index)).next_u64();
    double fid;
    if (e.v == 1.00) {
      const DensityMatrix phi = DensityMatrix::bell("phi+");
      fid = tomography(phi, phi, 1120000, row_seed).fidelity;
    } else {
      fid = tomography_recombined(Family::Isotropic, e.v, 0.0, 1400, row_seed).fidelity;
    }
    std::ostringstream label;
    label << "v=" << std::fixed << std::setprecision(2) << e.v;
    t.rows.push_back(row(label.str(), e.fid, fid, e.fid, e.err));
    ++index;
  }
  return t;
}

}  // namespace

std::vector<std::string> reproduce_table_names() {
  return {"det-pure", "det-v072", "stoch-v1", "stoch-v047", "tomo-fidelity"};
}

ReproTable reproduce_table(const std::string& name, uint64_t seed) {
  if (name == "det-pure") {
    const double published[3] = {0.5, 0.3635, 0.8635};
    const double exp_val[3] = {0.4975, 0.35440, 0.8519};
    const double exp_err[3] = {0.0005, 0.00009, 0.0002};
    return det_table(name, "Deterministic task, pure state (theta = 0.2356)",
                     DensityMatrix::partially_entangled(1.0, kThetaStar), published,
                     exp_val, exp_err);
  }
  if (name == "det-v072") {
    const double published[3] = {0.43, 0.3317, 0.7617};
    const double exp_val[3] = {0.43, 0.327, 0.757};
    const double exp_err[3] = {0.001, 0.002, 0.001};
    return det_table(name, "Deterministic task, noisy state (v = 0.72, theta = 0.2356)",
                     DensityMatrix::partially_entangled(0.72, kThetaStar), published,
                     exp_val, exp_err);
  }
  if (name == "stoch-v1") {
    const double published[5] = {1, 1, 1, 1, 1};
    const double exp_val[5] = {0.9900, 0.9811, 0.9795, 0.9485, 0.9748};
    const double exp_err[5] = {0.0002, 0.0003, 0.0002, 0.0003, 0.0001};
    return stoch_table(name, "Stochastic task, maximally entangled state",
                       DensityMatrix::bell("phi+"), published, exp_val, exp_err);
  }
  if (name == "stoch-v047") {
    const double published[5] = {0.735, 0.6025, 0.735, 0.603, 0.66875};
    const double exp_val[5] = {0.7238, 0.6086, 0.6613, 0.6161, 0.6524};
    const double exp_err[5] = {0.0007, 0.0009, 0.0007, 0.001, 0.0004};
    return stoch_table(name, "Stochastic task, isotropic state (v = 0.47)",
                       DensityMatrix::isotropic(0.47), published, exp_val, exp_err);
  }
  if (name == "tomo-fidelity") return tomo_table(seed);
  throw Error(ErrorCode::InvalidArgument, "unknown reproduce table '" + name + "'");
}

std::vector<ReproTable> reproduce_all(uint64_t seed) {
  std::vector<ReproTable> out;
  for (const auto& name : reproduce_table_names()) out.push_back(reproduce_table(name, seed));
  return out;
}

std::string repro_csv(const ReproTable& table) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "table,row,published,computed,delta,experimental,experimental_err\n";
  for (const auto& r : table.rows)
    os << table.name << ',' << r.label << ',' << r.published << ',' << r.computed << ','
       << r.delta << ',' << r.experimental << ',' << r.experimental_err << '\n';
  return os.str();
}

std::string repro_json(const std::vector<ReproTable>& tables) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : tables) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows)
      rows.push_back({{"row", r.label},
                      {"published", r.published},
                      {"computed", r.computed},
                      {"delta", r.delta},
                      {"experimental", r.experimental},
                      {"experimental_err", r.experimental_err}});
    arr.push_back({{"name", t.name}, {"title", t.title}, {"note", t.note}, {"rows", rows}});
  }
  return arr.dump(2);
}

}  // namespace qss
