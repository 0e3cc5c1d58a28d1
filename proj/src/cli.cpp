#include "ctgibbs/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "ctgibbs/diagnostics.hpp"
#include "ctgibbs/io.hpp"
#include "ctgibbs/phantoms.hpp"

namespace ctgibbs::cli {

namespace {

namespace fs = std::filesystem;

ImageGrid make_phantom(const RunConfig& cfg) {
  if (cfg.phantom == "grains") return grains_phantom(cfg.n, cfg.n_grains, cfg.seed);
  PpowerOptions opts;
  opts.blur_sigma = cfg.ppower_blur;
  opts.power = cfg.ppower_power;
  opts.zero_frac = cfg.ppower_zero_frac;
  return ppower_phantom(cfg.n, cfg.seed, opts);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError("cannot create output directory " + dir.string());
  }
}

Mat as_image(const Eigen::Ref<const Vec>& v) {
  const int n = image_side(v.size());
  return v.reshaped(n, n);
}

}  // namespace

fs::path run_simulate(const RunConfig& cfg) {
  const FanBeamGeometry geom = cfg.geometry();
  const fs::path dir = resolve_output_dir(cfg.output_dir);
  ensure_dir(dir);

  const ImageGrid x_true = make_phantom(cfg);
  const Vec nominal = nominal_angle_grid(cfg.q);
  const Vec theta_true = perturb_angles(nominal, cfg.sigma_true_deg, cfg.seed);
  const ExperimentTruth truth =
      simulate_sinogram(x_true, theta_true, nominal, cfg.noise_level, geom, cfg.seed);

  write_vector(dir / "x_true.bin", x_true.values);
  write_vector(dir / "theta_true.bin", theta_true);
  write_vector(dir / "angles_nominal.bin", nominal);
  write_matrix(dir / "sinogram.bin", truth.sinogram);
  const auto [img_lo, img_hi] = write_pgm16(dir / "x_true.pgm", as_image(x_true.values));

  write_meta(dir / "truth.meta",
             {{"phantom", cfg.phantom},
              {"n", std::to_string(cfg.n)},
              {"p", std::to_string(geom.p)},
              {"q", std::to_string(cfg.q)},
              {"m", std::to_string(geom.p * static_cast<long>(cfg.q))},
              {"fov", format_double(geom.fov)},
              {"dso", format_double(geom.dso)},
              {"dod", format_double(geom.dod)},
              {"det_len", format_double(geom.det_len)},
              {"noise_level", format_double(cfg.noise_level)},
              {"sigma_true_deg", format_double(cfg.sigma_true_deg)},
              {"sigma_obs", format_double(truth.sigma_obs)},
              {"lambda_true", format_double(truth.lambda_true)},
              {"seed", std::to_string(cfg.seed)},
              {"x_true_pgm_min", format_double(img_lo)},
              {"x_true_pgm_max", format_double(img_hi)}});
  return dir;
}

fs::path run_reconstruct(const RunConfig& cfg, const fs::path& data_dir) {
  const FanBeamGeometry geom = cfg.geometry();

  GibbsData data;
  data.geom = geom;
  data.sinogram = read_matrix(data_dir / "sinogram.bin");
  data.nominal_angles = read_vector(data_dir / "angles_nominal.bin");
  if (data.sinogram.rows() != geom.p || data.sinogram.cols() != cfg.q ||
      data.nominal_angles.size() != cfg.q) {
    throw DataError("data bundle dimensions do not match the configuration");
  }
  data.validate();

  const GibbsConfig sampler = cfg.sampler_config();
  const GibbsChain chain = run(sampler, data);
  if (chain.kept() < 2) throw ConfigError("sampler configuration keeps fewer than 2 states");

  const fs::path dir = resolve_output_dir(cfg.output_dir);
  ensure_dir(dir);

  write_vector(dir / "nominal_angles.bin", data.nominal_angles);
  write_matrix(dir / "x_chain.bin", chain.x);
  write_matrix(dir / "theta_chain.bin", chain.theta);
  write_vector(dir / "lambda_chain.bin", chain.lambda);
  write_vector(dir / "delta_chain.bin", chain.delta);
  write_vector(dir / "kappa_chain.bin", chain.kappa);

  const auto [mean_img, std_img] = posterior_image_stats(chain.x);
  write_vector(dir / "posterior_mean.bin", mean_img);
  write_vector(dir / "posterior_std.bin", std_img);
  const auto [mean_lo, mean_hi] = write_pgm16(dir / "posterior_mean.pgm", as_image(mean_img));
  const auto [std_lo, std_hi] = write_pgm16(dir / "posterior_std.pgm", as_image(std_img));

  {
    std::ofstream csv(dir / "hyperchains.csv", std::ios::trunc);
    csv << "k,lambda,delta,kappa\n";
    csv.precision(17);
    for (Eigen::Index k = 0; k < chain.kept(); ++k) {
      csv << k << ',' << chain.lambda[k] << ',' << chain.delta[k] << ',' << chain.kappa[k]
          << '\n';
    }
    if (!csv) throw DataError("short write to hyperchains.csv");
  }

  {
    std::ofstream csv(dir / "diagnostics.csv", std::ios::trunc);
    csv << "param,mean,std,msj,iact,n_ess\n";
    csv.precision(17);
    auto row = [&](const char* name, const Vec& c) {
      const Mat as_row = c.transpose();
      csv << name << ',' << c.mean() << ',' << std::sqrt((c.array() - c.mean()).square().sum() / (c.size() - 1))
          << ',' << msj(as_row) << ',' << iact(c).tau << ',' << ess(c) << '\n';
    };
    row("lambda", chain.lambda);
    row("delta", chain.delta);
    row("kappa", chain.kappa);
    if (!csv) throw DataError("short write to diagnostics.csv");
  }

  std::vector<std::pair<std::string, std::string>> meta{
      {"n", std::to_string(geom.n)},
      {"p", std::to_string(geom.p)},
      {"q", std::to_string(cfg.q)},
      {"d", std::to_string(geom.pixels())},
      {"n_s", std::to_string(sampler.n_s)},
      {"n_burn", std::to_string(chain.n_burn)},
      {"thinning", std::to_string(chain.thinning)},
      {"n_kept", std::to_string(chain.kept())},
      {"mode", cfg.mode},
      {"sampler_seed", std::to_string(sampler.seed)},
      {"model_calls_total", std::to_string(chain.total_model_calls())},
      {"posterior_mean_pgm_min", format_double(mean_lo)},
      {"posterior_mean_pgm_max", format_double(mean_hi)},
      {"posterior_std_pgm_min", format_double(std_lo)},
      {"posterior_std_pgm_max", format_double(std_hi)},
  };
  if (chain.theta_proposals > 0) {
    const double rate = chain.theta_accepts.cast<double>().sum() /
                        (static_cast<double>(chain.theta_proposals) * chain.theta.rows());
    meta.emplace_back("theta_accept_rate", format_double(rate));
  }
  if (chain.kappa_proposals > 0) {
    meta.emplace_back("kappa_accept_rate",
                      format_double(static_cast<double>(chain.kappa_accepts) /
                                    static_cast<double>(chain.kappa_proposals)));
  }
  if (chain.is_checks > 0) {
    meta.emplace_back("is_accept_mean",
                      format_double(chain.is_accept_sum / static_cast<double>(chain.is_checks)));
  }
  if (fs::exists(data_dir / "x_true.bin")) {
    const Vec x_true = read_vector(data_dir / "x_true.bin");
    meta.emplace_back("eta", format_double(rel_error(mean_img, x_true)));
    meta.emplace_back("eta_reference", "posterior_mean vs x_true");
  }
  write_meta(dir / "run.meta", meta);
  return dir;
}

void run_report(const fs::path& chains_dir, std::ostream& out) {
  if (!fs::exists(chains_dir / "run.meta")) {
    throw DataError("no chain bundle at " + chains_dir.string());
  }
  const MetaMap meta = read_meta(chains_dir / "run.meta");
  const Vec lambda = read_vector(chains_dir / "lambda_chain.bin");
  const Vec delta = read_vector(chains_dir / "delta_chain.bin");
  const Vec kappa = read_vector(chains_dir / "kappa_chain.bin");
  const Mat theta = read_matrix(chains_dir / "theta_chain.bin");
  const Vec nominal = read_vector(chains_dir / "nominal_angles.bin");
  if (lambda.size() < 2 || theta.cols() != lambda.size() || theta.rows() != nominal.size()) {
    throw DataError("chain bundle at " + chains_dir.string() + " is empty or inconsistent");
  }

  out << "chain bundle: " << chains_dir.string() << "\n";
  for (const char* key : {"mode", "n_s", "n_burn", "thinning", "n_kept", "model_calls_total"}) {
    if (auto it = meta.find(key); it != meta.end()) out << "  " << key << " = " << it->second << "\n";
  }
  if (auto it = meta.find("eta"); it != meta.end()) out << "  eta = " << it->second << "\n";

  out << "\nparam        mean          std           MSJ           IACT     n_ESS\n";
  auto line = [&](const char* name, const Vec& c) {
    const Mat as_row = c.transpose();
    const double mean = c.mean();
    const double sd = std::sqrt((c.array() - mean).square().sum() / (c.size() - 1));
    out << std::left << std::setw(9) << name << std::scientific << std::setprecision(4)
        << std::setw(14) << mean << std::setw(14) << sd << std::setw(14) << msj(as_row)
        << std::fixed << std::setprecision(2) << std::setw(9) << iact(c).tau
        << std::setw(8) << static_cast<long>(ess(c)) << "\n";
  };
  line("lambda", lambda);
  line("delta", delta);
  line("kappa", kappa);

  const auto [theta_mean, theta_std] = angle_chain_stats(theta);
  const Mat theta_for_msj = theta;
  out << "\nangles: q = " << nominal.size() << ", MSJ(theta) = " << std::scientific
      << std::setprecision(4) << msj_angles(theta_for_msj) << "\n";

  {
    std::ofstream csv(chains_dir / "angle_summary.csv", std::ios::trunc);
    csv << "index,nominal_deg,post_mean_deg,post_std_deg\n";
    csv.precision(17);
    const double to_deg = 180.0 / M_PI;
    for (Eigen::Index i = 0; i < nominal.size(); ++i) {
      csv << i << ',' << nominal[i] * to_deg << ',' << theta_mean[i] * to_deg << ','
          << theta_std[i] * to_deg << '\n';
    }
    if (!csv) throw DataError("short write to angle_summary.csv");
  }
  {
    std::ofstream csv(chains_dir / "cumulative_means.csv", std::ios::trunc);
    csv << "k,lambda,delta,kappa\n";
    csv.precision(17);
    const Vec cl = cumulative_mean(lambda);
    const Vec cd = cumulative_mean(delta);
    const Vec ck = cumulative_mean(kappa);
    for (Eigen::Index k = 0; k < cl.size(); ++k) {
      csv << k << ',' << cl[k] << ',' << cd[k] << ',' << ck[k] << '\n';
    }
    if (!csv) throw DataError("short write to cumulative_means.csv");
  }
}

}  // namespace ctgibbs::cli
