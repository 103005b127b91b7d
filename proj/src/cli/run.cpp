#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "whdet/cli.hpp"
#include "whdet/sinhsine.hpp"

namespace whdet::cli {
namespace {

struct GContext {
  sinhsine::SinhParams params;
  sinhsine::IdentityInputs inputs;
  std::string error;
};

bool needs_rhs(Command command) { return command != Command::lhs; }
bool needs_lhs(Command command) {
  return command == Command::lhs || command == Command::verify || command == Command::sweep;
}
bool checks_tol(Command command) { return command == Command::verify || command == Command::sweep; }

SweepRow compute_row(const RunConfig& config, const GContext& ctx, double alpha) {
  SweepRow row;
  row.g = ctx.params.g;
  row.alpha = alpha;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (!ctx.error.empty()) throw Error(ctx.error);
    const wh::KernelSpec spec = sinhsine::make_kernel_spec(ctx.params);
    std::optional<fredholm::DetResult> lhs;
    if (needs_lhs(config.command)) {
      lhs = wh::lhs_det(spec, alpha, config.n_lhs);
      row.lhs = lhs->value;
      row.n_lhs = config.n_lhs;
    }
    row.Z = ctx.inputs.Z;
    row.c = ctx.inputs.c;
    row.asym = sinhsine::det_asym(alpha, ctx.params).value;
    if (needs_rhs(config.command)) {
      const wh::RhsResult rhs = sinhsine::rhs_closed(ctx.params, ctx.inputs, alpha, config.n_rhs);
      row.rhs_det = rhs.det.value;
      row.rhs = rhs.value;
      row.n_rhs = config.n_rhs;
      if (lhs) row.rel_disc = wh::relative_discrepancy(lhs->log_value, rhs.log_value);
    }
    for (const std::optional<double>* v :
         {&row.lhs, &row.rhs, &row.Z, &row.c, &row.rhs_det, &row.asym, &row.rel_disc}) {
      if (*v && !std::isfinite(**v)) throw EvaluationError("non-finite result");
    }
  } catch (const Error& e) {
    SweepRow failed;
    failed.g = row.g;
    failed.alpha = alpha;
    failed.error = e.what();
    return failed;
  }
  if (config.timing) {
    row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                 .count();
  }
  return row;
}

template <class Task>
void run_parallel(std::size_t count, std::size_t workers, Task task) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

} // namespace

std::vector<std::pair<double, double>> plan(const RunConfig& config) {
  std::vector<double> gs = config.g;
  std::sort(gs.begin(), gs.end());
  std::vector<std::pair<double, double>> out;
  for (double g : gs) {
    for (double a : config.alpha.values()) out.emplace_back(g, a);
  }
  return out;
}

std::vector<SweepRow> compute_rows(const RunConfig& config) {
  validate(config);
  const auto cells = plan(config);

  std::vector<double> gs;
  for (const auto& [g, a] : cells) {
    if (gs.empty() || gs.back() != g) gs.push_back(g);
  }
  std::vector<GContext> contexts(gs.size());
  run_parallel(gs.size(), config.workers, [&](std::size_t i) {
    GContext& ctx = contexts[i];
    ctx.params = sinhsine::SinhParams::from_g(gs[i]);
    try {
      ctx.inputs = sinhsine::identity_inputs(ctx.params);
    } catch (const Error& e) {
      ctx.error = e.what();
    }
  });
  std::map<double, const GContext*> by_g;
  for (std::size_t i = 0; i < gs.size(); ++i) by_g[gs[i]] = &contexts[i];

  std::vector<SweepRow> rows(cells.size());
  run_parallel(cells.size(), config.workers, [&](std::size_t i) {
    rows[i] = compute_row(config, *by_g.at(cells[i].first), cells[i].second);
  });
  return rows;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::vector<SweepRow> rows = compute_rows(config);

  if (config.output_path.empty()) {
    write_table(rows, config.format, out);
  } else {
    emit_table(rows, config.format, config.output_path);
  }
  if (config.emit_plot) emit_plot(rows, config.output_path);

  int status = kExitOk;
  for (const SweepRow& r : rows) {
    if (r.failed()) {
      err << "whdet: g=" << r.g << " alpha=" << r.alpha << ": " << r.error << '\n';
      status = kExitNumerical;
    } else if (checks_tol(config.command) && r.rel_disc && !(*r.rel_disc < config.tol)) {
      err << "whdet: g=" << r.g << " alpha=" << r.alpha << ": relative discrepancy "
          << *r.rel_disc << " exceeds tol " << config.tol << '\n';
      if (status == kExitOk) status = kExitVerifyFailed;
    }
  }
  return status;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_config(argc, argv);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "whdet: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    return run(config, out, err);
  } catch (const UsageError& e) {
    err << "whdet: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "whdet: " << e.what() << '\n';
    return kExitNumerical;
  }
}

} // namespace whdet::cli
