#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "cmv/caratheodory.hpp"
#include "cmv/errors.hpp"
#include "cmv/operator.hpp"
#include "cmv/spectral.hpp"
#include "cmv/tracemap.hpp"
#include "cmv/transfer.hpp"
#include "cmv/verify.hpp"

namespace cmvtool {

namespace fs = std::filesystem;
using cmv::cplx;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

std::string tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

cmv::ContinuedFractionData cf_for(const cmv::RunConfig& cfg) {
  return cmv::cf_data(cmv::partial_quotients(cfg.omega, cfg.depth), cfg.depth);
}

void require_sturmian(const cmv::RunConfig& cfg, const char* what) {
  if (cfg.model != cmv::ModelKind::sturmian) {
    throw cmv::DomainError(std::string(what) + " needs the sturmian model");
  }
}

}  // namespace

int cmd_coeffs(const cmv::RunConfig& cfg, const fs::path& dir) {
  const cmv::VerblunskySequence seq = cmv::make_model(cfg);
  auto os = open_out(dir / "coefficients.csv");
  cmv::write_coefficients_csv(os, seq, cfg.n_lo, cfg.n_hi);
  std::cout << "wrote " << (dir / "coefficients.csv").string() << '\n';
  return 0;
}

int cmd_spectrum(const cmv::RunConfig& cfg, const fs::path& dir) {
  require_sturmian(cfg, "spectrum");
  const cmv::ContinuedFractionData cf = cf_for(cfg);
  const cmv::GammaSweep sweep = cmv::gamma_sweep(cfg.alphabet, cf,
                                                 cmv::uniform_theta_grid(cfg.theta_count), cfg.depth);
  {
    auto os = open_out(dir / "atlas.csv");
    cmv::write_atlas_csv(os, sweep.atlas);
  }
  {
    auto os = open_out(dir / "gamma.json");
    cmv::write_gamma_json(os, sweep.constants);
  }
  std::cout << "depth " << cfg.depth << ": " << sweep.atlas.count(cfg.depth) << " of "
            << cfg.theta_count << " grid points in the spectrum approximation; beta = "
            << sweep.constants.beta << '\n';
  return 0;
}

int cmd_measure(const cmv::RunConfig& cfg, const fs::path& dir) {
  const cmv::VerblunskySequence seq = cmv::make_model(cfg);
  if (seq.support() != cmv::Support::two_sided) {
    throw cmv::SupportError("measure needs a two-sided model");
  }
  const std::vector<double> grid = cmv::uniform_theta_grid(cfg.theta_count);
  nlohmann::json summary = nlohmann::json::array();
  auto arcs = open_out(dir / "arc_mass.csv");
  arcs.precision(17);
  arcs << "r,theta,cumulative_mass\n";
  for (double r : cfg.r) {
    const cmv::MeasureProfile p = cmv::lambda_r_profile(seq, r, grid);
    auto os = open_out(dir / ("density_r" + tag(r) + ".csv"));
    cmv::write_profile_csv(os, p);
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
      arcs << r << ',' << p.theta[i] << ',' << p.cumulative[i] << '\n';
    }
    nlohmann::json rec = {{"r", r}, {"total_mass", p.total_mass()}};
    // Cross-check F at z = r from the Schur route against the resolvent route.
    cmv::GZOptions gopt;
    gopt.half_width = cfg.window;
    gopt.eta_b = cfg.eta_b;
    const cmv::GZContext ctx = cmv::build_gz_context(seq, r, gopt);
    rec["F_schur_at_r"] = cmv::ExtendedCaratheodory(seq).F(r).value.real();
    rec["F_resolvent_at_r"] = cmv::F_extended(ctx).value.real();
    rec["resolvent_half_width"] = ctx.hi;
    summary.push_back(rec);
    std::cout << "r = " << r << ": total mass " << p.total_mass() << '\n';
  }
  auto js = open_out(dir / "measure.json");
  js << summary.dump(2) << '\n';
  return 0;
}

int cmd_holder(const cmv::RunConfig& cfg, const fs::path& dir) {
  const cmv::VerblunskySequence seq = cmv::make_model(cfg);
  if (seq.support() != cmv::Support::two_sided) {
    throw cmv::SupportError("holder needs a two-sided model");
  }
  if (cfg.eps.size() < 3) throw cmv::InsufficientDataError("holder needs at least 3 eps values");
  std::vector<double> thetas = cfg.holder_theta;
  if (thetas.empty()) {
    if (cfg.model == cmv::ModelKind::sturmian) {
      thetas = cmv::spectrum_sample_points(cfg.alphabet, cf_for(cfg), cfg.depth, cfg.theta_count, 4);
    } else {
      thetas = {1.0};
    }
  }
  const cmv::ExtendedCaratheodory F(seq);
  const auto right = cmv::split_at_origin(seq).first;
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const double th = thetas[k];
    const cmv::HolderFit fit = cmv::holder_at(F, th, cfg.eps);
    auto os = open_out(dir / ("holder_" + std::to_string(k) + ".csv"));
    cmv::write_holder_csv(os, fit);
    nlohmann::json rec = {{"theta", th},
                          {"beta_hat", fit.beta_hat},
                          {"envelope_beta", fit.envelope_beta},
                          {"arc_points", fit.points}};
    std::cout << "theta = " << th << ": beta_hat " << fit.beta_hat << ", envelope "
              << fit.envelope_beta;
    // Off the spectrum the solutions grow exponentially and overflow before L = 1e4.
    try {
      const cmv::SolutionExponents g = cmv::solution_exponents(right, std::polar(1.0, th));
      rec["gamma1"] = g.gamma1;
      rec["gamma2"] = g.gamma2;
      rec["gamma_prediction"] = g.beta();
      std::cout << ", prediction " << g.beta() << '\n';
    } catch (const cmv::OverflowError& e) {
      rec["gamma1"] = rec["gamma2"] = rec["gamma_prediction"] = nullptr;
      rec["gamma_error"] = e.what();
      std::cout << ", no prediction (" << e.what() << ")\n";
    }
    out.push_back(rec);
  }
  auto js = open_out(dir / "holder.json");
  js << out.dump(2) << '\n';
  return 0;
}

int cmd_walk(const cmv::RunConfig& cfg, const fs::path& dir) {
  const cmv::VerblunskySequence seq = cmv::make_model(cfg);
  cmv::WalkEvolver walk(seq, cmv::State::delta(0), cfg.steps);
  auto norms = open_out(dir / "walk_norms.csv");
  norms.precision(17);
  norms << "k,norm,support_radius\n";
  const auto record = [&] {
    const cmv::State& s = walk.state();
    long radius = 0;
    for (std::size_t i = 0; i < s.amp.size(); ++i) {
      if (std::norm(s.amp[i]) > 1e-24) radius = std::max(radius, std::abs(s.first + static_cast<long>(i)));
    }
    norms << walk.steps() << ',' << s.norm() << ',' << radius << '\n';
    auto os = open_out(dir / ("walk_k" + std::to_string(walk.steps()) + ".csv"));
    cmv::write_state_csv(os, s);
  };
  record();
  while (walk.steps() < cfg.steps) {
    walk.advance(std::min(cfg.snapshot_every, cfg.steps - walk.steps()));
    record();
  }
  std::cout << "evolved " << cfg.steps << " steps; final norm " << walk.state().norm() << '\n';
  return 0;
}

int cmd_verify(const cmv::RunConfig& cfg, const fs::path& dir) {
  cmv::AcceptanceOptions opt;
  opt.seed = cfg.seed;
  const cmv::AcceptanceReport report = cmv::run_acceptance(
      opt, [](const cmv::CriterionResult& r) { std::cout << cmv::format_line(r) << std::endl; });
  std::cout << "M- convention: " << report.m_minus_convention << '\n';
  auto os = open_out(dir / "report.json");
  cmv::write_report_json(os, report);
  const bool ok = report.hard_passed();
  std::cout << (ok ? "all required checks passed" : "required checks FAILED") << '\n';
  return ok ? 0 : 1;
}

}  // namespace cmvtool
