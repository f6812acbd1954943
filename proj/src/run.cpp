#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "wva/config.hpp"
#include "wva/ensemble.hpp"
#include "wva/error.hpp"
#include "wva/estimation.hpp"
#include "wva/weak_protocol.hpp"

namespace wva {

namespace {

namespace fs = std::filesystem;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string opt_num(const std::optional<double>& v)
{
    return v ? num(*v) : std::string();
}

class CsvWriter {
public:
    CsvWriter(const ExperimentConfig& config, std::string_view header)
    {
        out_ << "# config: " << to_json(config).dump() << '\n' << header << '\n';
    }

    template <typename... Fields>
    void row(const Fields&... fields)
    {
        bool first = true;
        ((out_ << (first ? "" : ",") << fields, first = false), ...);
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    f << content;
    if (!f)
        throw Error(ErrorCode::io, "failed writing '" + path.string() + "'");
}

unsigned worker_count()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

void run_pointer(const ExperimentConfig& c, const fs::path& dir)
{
    const ProtocolParams params{c.kappa, c.phi, c.width, c.beta};
    const auto exact = post_select(evolve_exact(params, c.fock_dim), c.phi);
    const auto first = post_select(evolve_first_order(params, c.fock_dim), c.phi);

    const double shift = std::sqrt(2.0) * c.width * c.kappa;
    const auto grid = make_position_grid(c.width, -shift, shift);
    const auto pdf = grid_density(exact.pointer, grid);
    CsvWriter pdf_csv(c, "x,pdf");
    for (std::size_t i = 0; i < grid.size; ++i)
        pdf_csv.row(num(grid.at(i)), num(pdf[i]));
    write_file(dir / "pointer_pdf.csv", pdf_csv.str());

    const double mean = mean_position(exact.pointer);
    CsvWriter summary(c, "kappa,phi,width,regime,mean_x,mean_x_first_order,mean_x_closed_form,"
                         "weak_value,amplification,prob_exact,prob_leading_order,leakage");
    summary.row(num(c.kappa), num(c.phi), num(c.width), to_string(classify_regime(params)),
                num(mean), num(mean_position(first.pointer)),
                num(two_gaussian_mean_position(c.kappa, c.phi, c.width)),
                c.phi > 0.0 ? num(weak_value(c.phi)) : std::string(),
                c.kappa > 0.0 ? num(mean / shift) : std::string(),
                num(exact.probability), num(first.leading_order),
                num(leakage(exact.pointer.amps())));
    write_file(dir / "pointer_summary.csv", summary.str());
}

void run_ensemble(const ExperimentConfig& c, const fs::path& dir)
{
    const auto scattered = raman_scatter_first_order(c.n_photons, c.n_atoms, c.kappa);
    const auto detection = detect_photon(scattered, c.phi);
    const auto dist = atomic_homodyne_distribution(detection.atomic);

    CsvWriter dist_csv(c, "x,probability");
    for (const auto& o : dist)
        dist_csv.row(num(o.x), num(o.probability));
    write_file(dir / "ensemble_distribution.csv", dist_csv.str());

    const std::string tv = num(continuum_tv_distance(dist, c.phi, c.kappa));
    CsvWriter summary(c, "n_atoms,n_photons,kappa,phi,prob_weight,mean_x,mean_x_first_order,tv_distance");
    summary.row(c.n_atoms, c.n_photons, num(c.kappa), num(c.phi), num(detection.prob_weight),
                num(distribution_mean(dist)), num(first_order_mean_position(c.kappa, c.phi, 1.0)),
                tv);
    write_file(dir / "ensemble_summary.csv", summary.str());
}

void run_sweep(const ExperimentConfig& c, const fs::path& dir)
{
    const auto stats = sweep_phi(c.kappa, c.beta, c.phi_grid, c.n_trials, c.master_seed, c.width,
                                 worker_count());
    CsvWriter csv(c, "phi,strategy,regime,kappa_hat,rmse,n_detections,n_trials,detection_rate,"
                     "insufficient_data,snr_warning");
    for (const auto& s : stats)
        csv.row(num(s.phi), s.strategy, s.regime, opt_num(s.kappa_hat), opt_num(s.rmse),
                s.n_detections, s.n_trials, num(s.detection_rate), int(s.insufficient_data),
                int(s.snr_warning));
    write_file(dir / "sweep.csv", csv.str());
}

nlohmann::json optional_json(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

void run_estimate_command(const ExperimentConfig& c, const fs::path& dir)
{
    const ProtocolParams params{c.kappa, c.phi, c.width, c.beta};
    const auto s = run_estimate(params, c.n_trials, c.master_seed, worker_count());
    nlohmann::json j = {
        {"strategy", s.strategy},
        {"regime", s.regime},
        {"kappa_hat", optional_json(s.kappa_hat)},
        {"rmse", optional_json(s.rmse)},
        {"n_detections", s.n_detections},
        {"n_trials", s.n_trials},
        {"detection_rate", s.detection_rate},
        {"insufficient_data", s.insufficient_data},
        {"snr_warning", s.snr_warning},
        {"config", to_json(c)},
    };
    write_file(dir / "estimate.json", j.dump(2) + "\n");
}

int exit_code(ErrorCode code)
{
    switch (code) {
    case ErrorCode::validation:
    case ErrorCode::parse:
    case ErrorCode::invalid_dimension:
        return 2;
    case ErrorCode::io:
        return 4;
    default:
        return 3;
    }
}

void report(std::ostream& err, std::string_view code, const std::string& message)
{
    nlohmann::json j = {{"error", {{"code", code}, {"message", message}}}};
    err << j.dump() << '\n';
}

} // namespace

void run(const ExperimentConfig& config)
{
    config.validate();
    const fs::path dir(config.output_path);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::io, "cannot create output directory '" + dir.string() + "'");

    switch (config.command) {
    case Command::pointer: run_pointer(config, dir); break;
    case Command::ensemble: run_ensemble(config, dir); break;
    case Command::sweep: run_sweep(config, dir); break;
    case Command::estimate: run_estimate_command(config, dir); break;
    }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        run(parse_config(args));
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << "usage: wva --command {pointer,ensemble,sweep,estimate} [--kappa K] [--phi P]\n"
               "           [--width W] [--beta B] [--n-atoms N] [--n-photons N] [--n-trials N]\n"
               "           [--fock-dim D] [--phi-grid P1,P2,...] [--seed S] [--out DIR]\n"
               "           [--config FILE]\n";
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        report(err, "parse", e.what());
        return 2;
    } catch (const Error& e) {
        report(err, to_string(e.code()), e.what());
        return exit_code(e.code());
    } catch (const std::exception& e) {
        report(err, "internal", e.what());
        return 1;
    }
}

} // namespace wva
