#include "qss.h"

#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <string>

#include "core/classical.hpp"
#include "core/json_io.hpp"
#include "core/optics.hpp"
#include "core/protocol.hpp"
#include "core/reproduce.hpp"
#include "core/seesaw.hpp"
#include "core/states.hpp"
#include "core/steering.hpp"

struct qss_state {
  qss::DensityMatrix rho;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_out(char** out, const std::string& s) {
  if (out != nullptr) *out = dup_string(s);
}

template <typename F>
qss_status guard(F&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return QSS_OK;
  } catch (const qss::Error& e) {
    g_last_error = e.what();
    switch (e.code()) {
      case qss::ErrorCode::InvalidArgument:
        return QSS_ERR_INVALID_ARGUMENT;
      case qss::ErrorCode::SolverFailure:
        return QSS_ERR_SOLVER;
      default:
        return QSS_ERR_INTERNAL;
    }
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return QSS_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QSS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QSS_ERR_INTERNAL;
  }
}

const char* checked(const char* s, const char* what) {
  qss::require(s != nullptr, std::string(what) + " must not be null");
  return s;
}

template <typename T>
T* checked_ptr(T* p, const char* what) {
  qss::require(p != nullptr, std::string(what) + " must not be null");
  return p;
}

}  // namespace

extern "C" {

const char* qss_version(void) { return "1.0.0"; }

const char* qss_last_error(void) { return g_last_error.c_str(); }

void qss_string_free(char* s) { std::free(s); }

qss_status qss_state_family(const char* family, double v, double theta, qss_state** out) {
  return guard([&] {
    checked_ptr(out, "out");
    const qss::Family fam = qss::family_from_name(checked(family, "family"));
    *out = new qss_state{qss::family_state(fam, v, theta)};
  });
}

qss_status qss_state_bell(const char* name, qss_state** out) {
  return guard([&] {
    checked_ptr(out, "out");
    *out = new qss_state{qss::DensityMatrix::bell(checked(name, "name"))};
  });
}

qss_status qss_state_from_json(const char* json, qss_state** out) {
  return guard([&] {
    checked_ptr(out, "out");
    const auto doc = nlohmann::json::parse(checked(json, "json"));
    *out = new qss_state{qss::state_from_json(doc)};
  });
}

qss_status qss_state_to_json(const qss_state* state, char** out_json) {
  return guard([&] {
    checked_ptr(state, "state");
    set_out(checked_ptr(out_json, "out_json"), qss::state_to_json(state->rho).dump(2));
  });
}

void qss_state_free(qss_state* state) { delete state; }

qss_status qss_state_negativity(const qss_state* state, double* out) {
  return guard([&] {
    checked_ptr(state, "state");
    *checked_ptr(out, "out") = state->rho.negativity();
  });
}

qss_status qss_state_fidelity(const qss_state* a, const qss_state* b, double* out) {
  return guard([&] {
    checked_ptr(a, "a");
    checked_ptr(b, "b");
    *checked_ptr(out, "out") = qss::fidelity(a->rho, b->rho);
  });
}

qss_status qss_eval(const char* task, const qss_state* state, char** out_json) {
  return guard([&] {
    checked_ptr(state, "state");
    const qss::Task t = qss::task_from_name(checked(task, "task"));
    const qss::Behavior b = qss::evaluate_canonical(t, state->rho);
    nlohmann::json doc{{"scores", qss::scores_to_json(qss::score(b))},
                       {"behavior", qss::behavior_to_json(b)}};
    set_out(checked_ptr(out_json, "out_json"), doc.dump(2));
  });
}

qss_status qss_closed_form(const char* task, const char* family, double v, double theta,
                           char** out_json) {
  return guard([&] {
    const qss::Task t = qss::task_from_name(checked(task, "task"));
    const qss::Family fam = qss::family_from_name(checked(family, "family"));
    const qss::Scores s = qss::closed_form(t, fam, v, theta);
    set_out(checked_ptr(out_json, "out_json"), qss::scores_to_json(s).dump(2));
  });
}

qss_status qss_threshold(const char* task, const char* family, double theta, double* out) {
  return guard([&] {
    const qss::Task t = qss::task_from_name(checked(task, "task"));
    const qss::Family fam = qss::family_from_name(checked(family, "family"));
    *checked_ptr(out, "out") = qss::threshold(t, fam, theta);
  });
}

qss_status qss_classical_bound(const char* task, double* out) {
  return guard([&] {
    *checked_ptr(out, "out") =
        qss::classical_bound(qss::task_from_name(checked(task, "task")));
  });
}

qss_status qss_classical_best(const char* task, char** out_json) {
  return guard([&] {
    const qss::Task t = qss::task_from_name(checked(task, "task"));
    const qss::ClassicalReport report = qss::enumerate_classical(t);
    nlohmann::json doc{{"task", qss::task_name(t)},
                       {"best", report.best_numerator / 32.0},
                       {"best_numerator", report.best_numerator},
                       {"strategies_enumerated", report.strategies_enumerated},
                       {"strategy",
                        {{"f_id", report.best_strategy.f_id},
                         {"g_id", report.best_strategy.g_id},
                         {"h_id", report.best_strategy.h_id}}}};
    set_out(checked_ptr(out_json, "out_json"), doc.dump(2));
  });
}

qss_status qss_classical_frontier(char** out_csv) {
  return guard([&] {
    const qss::ClassicalReport report = qss::enumerate_classical(qss::Task::Stochastic);
    set_out(checked_ptr(out_csv, "out_csv"), qss::frontier_csv(report));
  });
}

qss_status qss_seesaw(const char* task, int restarts, uint64_t seed, char** out_json) {
  return guard([&] {
    const qss::Task t = qss::task_from_name(checked(task, "task"));
    set_out(checked_ptr(out_json, "out_json"),
            qss::seesaw_report_json(qss::seesaw(t, restarts, seed)));
  });
}

qss_status qss_certify(const qss_state* state, int level, char** out_json) {
  return guard([&] {
    checked_ptr(state, "state");
    set_out(checked_ptr(out_json, "out_json"),
            qss::verdict_json(qss::certify(state->rho, level)));
  });
}

qss_status qss_certified_visibility(const char* family, double theta, int level,
                                    double* out) {
  return guard([&] {
    const qss::Family fam = qss::family_from_name(checked(family, "family"));
    *checked_ptr(out, "out") = qss::certified_visibility(fam, theta, level);
  });
}

qss_status qss_experiment(const char* task, const char* family, double v, double theta,
                          long long events, uint64_t seed, int infinite_stats,
                          char** out_summary_json, char** out_counts_csv) {
  return guard([&] {
    qss::ExperimentConfig cfg;
    cfg.task = qss::task_from_name(checked(task, "task"));
    cfg.family = qss::family_from_name(checked(family, "family"));
    cfg.v = v;
    cfg.theta = theta;
    cfg.events = events;
    cfg.seed = seed;
    cfg.infinite_stats = infinite_stats != 0;
    const qss::ExperimentResult r = qss::run_experiment(cfg);
    set_out(out_summary_json, qss::experiment_summary_json(cfg, r));
    set_out(out_counts_csv, qss::experiment_counts_csv(r));
  });
}

qss_status qss_tomography(const char* family, double v, double theta,
                          long long events_per_setting, uint64_t seed,
                          char** out_summary_json, char** out_counts_csv) {
  return guard([&] {
    const qss::Family fam = qss::family_from_name(checked(family, "family"));
    const qss::TomographyResult r =
        qss::tomography_recombined(fam, v, theta, events_per_setting, seed);
    set_out(out_summary_json, qss::tomography_summary_json(r));
    set_out(out_counts_csv, qss::tomography_counts_csv(r));
  });
}

qss_status qss_verify_tables(char** out_json, char** out_csv) {
  return guard([&] {
    const auto findings = qss::verify_settings_tables();
    set_out(out_json, qss::findings_json(findings));
    set_out(out_csv, qss::findings_csv(findings));
  });
}

qss_status qss_reproduce(const char* table, uint64_t seed, char** out_json,
                         char** out_csv) {
  return guard([&] {
    if (table == nullptr) {
      qss::require(out_csv == nullptr, "csv output needs a single table");
      set_out(out_json, qss::repro_json(qss::reproduce_all(seed)));
      return;
    }
    const qss::ReproTable t = qss::reproduce_table(table, seed);
    set_out(out_json, qss::repro_json({t}));
    set_out(out_csv, qss::repro_csv(t));
  });
}

}  // extern "C"
