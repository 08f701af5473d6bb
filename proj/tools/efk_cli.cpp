#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "efk/efk.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct StringDeleter {
  void operator()(char* s) const { efk_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct FieldDeleter {
  void operator()(efk_field_t* f) const { efk_field_free(f); }
};
using OwnedField = std::unique_ptr<efk_field_t, FieldDeleter>;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

// 0 on success, 1 for failed checks or unconverged solves, 2 for errors.
int report(efk_status s, const char* what) {
  if (s == EFK_OK) return 0;
  if (s == EFK_NOT_CONVERGED || s == EFK_CHECK_FAILED) {
    std::cerr << what << ": " << (s == EFK_NOT_CONVERGED ? "not converged" : "checks failed") << '\n';
    return 1;
  }
  std::cerr << what << ": " << efk_last_error() << '\n';
  return 2;
}

bool has_output(efk_status s) { return s == EFK_OK || s == EFK_NOT_CONVERGED || s == EFK_CHECK_FAILED; }

std::string fmt(const ordered_json& v) {
  if (v.is_null()) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourth-order Allen-Cahn / extended Fisher-Kolmogorov solver"};
  app.require_subcommand(1);

  std::string run_config, out_dir = ".";
  auto* minimize = app.add_subcommand("minimize", "Minimize the energy functional");
  minimize->add_option("--config", run_config, "Run configuration JSON")->required()->check(CLI::ExistingFile);
  minimize->add_option("--out", out_dir, "Output directory");

  std::string solution, stab_out;
  double stab_beta = std::nan("");
  auto* stability = app.add_subcommand("stability", "Principal eigenvalues of the linearized operators");
  stability->add_option("--solution", solution, "Field CSV with its JSON sidecar")->required()->check(CLI::ExistingFile);
  stability->add_option("--beta", stab_beta, "beta (defaults to the value stored with the field)");
  stability->add_option("--out", stab_out, "Report JSON path (stdout when omitted)");

  std::string branch_config;
  auto* branch = app.add_subcommand("branch", "Trace the bifurcating branch by pseudo-arclength continuation");
  branch->add_option("--config", branch_config, "Branch configuration JSON")->required()->check(CLI::ExistingFile);
  branch->add_option("--out", out_dir, "Output directory");

  double saddle_r = 50.0, saddle_beta = 1.6;
  int saddle_modes = 128;
  auto* saddle = app.add_subcommand("saddle", "Planar saddle solution by odd reflection");
  saddle->add_option("--R", saddle_r, "Quadrant side");
  saddle->add_option("--beta", saddle_beta, "beta");
  saddle->add_option("--modes", saddle_modes, "Sine modes per axis");
  saddle->add_option("--out", out_dir, "Output directory");

  std::string suites = "all", score_out = "scorecard.json", plots;
  bool quick = false;
  auto* verify = app.add_subcommand("verify", "Run verification suites and write a scorecard");
  verify->add_option("--suite", suites, "Comma-separated suites or 'all'");
  verify->add_option("--out", score_out, "Scorecard JSON path");
  verify->add_option("--plots", plots, "Directory for plot data");
  verify->add_flag("--quick", quick, "Coarse grids for a fast smoke run");

  std::string diff_a, diff_b;
  auto* diff = app.add_subcommand("diff", "Compare two scorecards");
  diff->add_option("first", diff_a)->required()->check(CLI::ExistingFile);
  diff->add_option("second", diff_b)->required()->check(CLI::ExistingFile);

  app.add_subcommand("version", "Print the library version")->callback([] { std::cout << efk_version() << '\n'; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (*minimize) {
      fs::create_directories(out_dir);
      efk_field_t* raw = nullptr;
      char* rep = nullptr;
      const efk_status s = efk_minimize(slurp(run_config).c_str(), &raw, &rep);
      OwnedField field(raw);
      OwnedString text(rep);
      if (has_output(s)) {
        const fs::path dir(out_dir);
        if (const efk_status w = efk_field_save(field.get(), (dir / "field.csv").c_str(), 1); w != EFK_OK)
          return report(w, "save");
        const auto j = ordered_json::parse(text.get());
        write_text(dir / "energy.json", j.dump(2));
        std::ofstream trace(dir / "trace.csv");
        trace << "iteration,energy,grad_norm,step\n";
        for (const auto& t : j.at("trace"))
          trace << t.at("iteration").get<int>() << ',' << fmt(t.at("energy")) << ',' << fmt(t.at("grad_norm")) << ','
                << fmt(t.at("step")) << '\n';
        std::cout << "J = " << fmt(j.at("energy").at("j_beta")) << ", |u|_inf = " << fmt(j.at("sup_norm"))
                  << ", iterations = " << j.at("iterations").get<int>() << '\n';
      }
      return report(s, "minimize");
    }
    if (*stability) {
      efk_field_t* raw = nullptr;
      if (const efk_status s = efk_field_load(solution.c_str(), &raw); s != EFK_OK) return report(s, "load");
      OwnedField field(raw);
      if (std::isnan(stab_beta)) {
        efk_field_info_t info;
        efk_field_info(field.get(), &info);
        if (!info.has_beta) {
          std::cerr << "stability: no beta stored with the field, pass --beta\n";
          return 2;
        }
        stab_beta = info.beta;
      }
      char* rep = nullptr;
      const efk_status s = efk_stability(field.get(), stab_beta, &rep);
      OwnedString text(rep);
      if (has_output(s)) {
        if (stab_out.empty()) {
          std::cout << text.get() << '\n';
        } else {
          write_text(stab_out, text.get());
        }
      }
      return report(s, "stability");
    }
    if (*branch) {
      fs::create_directories(out_dir);
      char* rep = nullptr;
      const efk_status s = efk_branch(slurp(branch_config).c_str(), &rep);
      OwnedString text(rep);
      if (has_output(s)) {
        const fs::path dir(out_dir);
        const auto j = ordered_json::parse(text.get());
        write_text(dir / "branch.json", j.dump(2));
        std::ofstream csv(dir / "branch.csv");
        std::ofstream plot(dir / "branch_sup.dat");
        csv << "arclength,beta,sup_norm,l2_norm,nu1\n";
        for (const auto& p : j.at("points")) {
          csv << fmt(p.at("arclength")) << ',' << fmt(p.at("beta")) << ',' << fmt(p.at("sup_norm")) << ','
              << fmt(p.at("l2_norm")) << ',' << fmt(p.at("nu1")) << '\n';
          plot << fmt(p.at("beta")) << ' ' << fmt(p.at("sup_norm")) << '\n';
        }
        std::cout << j.at("points").size() << " points, endpoint beta = " << fmt(j.at("endpoint")) << '\n';
      }
      return report(s, "branch");
    }
    if (*saddle) {
      char* rep = nullptr;
      const efk_status s = efk_saddle(saddle_r, saddle_beta, saddle_modes, out_dir.c_str(), nullptr, &rep);
      OwnedString text(rep);
      if (has_output(s)) std::cout << text.get() << '\n';
      return report(s, "saddle");
    }
    if (*verify) {
      char* rep = nullptr;
      const efk_status s = efk_verify(suites.c_str(), quick ? 1 : 0, plots.empty() ? nullptr : plots.c_str(), &rep);
      OwnedString text(rep);
      if (has_output(s)) {
        write_text(score_out, text.get());
        const auto j = ordered_json::parse(text.get());
        for (const auto& e : j.at("entries"))
          std::cout << (e.at("passed").get<bool>() ? "pass " : "FAIL ") << e.at("suite").get<std::string>() << ": "
                    << e.at("name").get<std::string>() << " (" << fmt(e.at("measured")) << ")\n";
      }
      return report(s, "verify");
    }
    if (*diff) {
      char* rep = nullptr;
      const efk_status s = efk_scorecard_diff(slurp(diff_a).c_str(), slurp(diff_b).c_str(), &rep);
      OwnedString text(rep);
      if (s == EFK_OK) std::cout << text.get() << '\n';
      return report(s, "diff");
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return 0;
}
