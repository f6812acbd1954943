#include "wva/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wva/ensemble.hpp"
#include "wva/error.hpp"

namespace wva {

namespace {

[[noreturn]] void invalid(const std::string& message)
{
    throw Error(ErrorCode::validation, message);
}

std::optional<Command> command_from(std::string_view name)
{
    for (Command c : {Command::pointer, Command::ensemble, Command::sweep, Command::estimate})
        if (to_string(c) == name)
            return c;
    return std::nullopt;
}

void check_unit(double v, const std::string& name)
{
    if (!std::isfinite(v) || v < 0.0)
        invalid(name + " must be >= 0");
    if (v >= 1.0)
        invalid(name + " must be < 1");
}

template <typename T>
T field(const nlohmann::json& j, const std::string& key)
{
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        invalid("config field '" + key + "' has the wrong type");
    }
}

} // namespace

std::string_view to_string(Command command) noexcept
{
    switch (command) {
    case Command::pointer: return "pointer";
    case Command::ensemble: return "ensemble";
    case Command::sweep: return "sweep";
    case Command::estimate: return "estimate";
    }
    return "pointer";
}

void ExperimentConfig::validate() const
{
    check_unit(kappa, "kappa");
    check_unit(phi, "phi");
    if (!(width > 0.0) || !std::isfinite(width))
        invalid("width must be > 0");
    check_unit(beta, "beta");
    if (n_atoms < 1 || n_atoms > max_atoms)
        invalid("n-atoms must be in [1, " + std::to_string(max_atoms) + "]");
    if (n_photons < 1)
        invalid("n-photons must be >= 1");
    if (n_trials < 1)
        invalid("n-trials must be >= 1");
    if (fock_dim < 2)
        invalid("fock-dim must be >= 2");
    if (phi_grid.empty())
        invalid("phi-grid must not be empty");
    for (double p : phi_grid)
        check_unit(p, "phi-grid entry");
    if (output_path.empty())
        invalid("out must not be empty");
}

nlohmann::json to_json(const ExperimentConfig& c)
{
    return {
        {"command", std::string(to_string(c.command))},
        {"kappa", c.kappa},
        {"phi", c.phi},
        {"width", c.width},
        {"beta", c.beta},
        {"n-atoms", c.n_atoms},
        {"n-photons", c.n_photons},
        {"n-trials", c.n_trials},
        {"fock-dim", c.fock_dim},
        {"phi-grid", c.phi_grid},
        {"seed", c.master_seed},
        {"out", c.output_path},
    };
}

ExperimentConfig apply_json(const nlohmann::json& j, ExperimentConfig c)
{
    if (!j.is_object())
        throw Error(ErrorCode::parse, "config must be a flat JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            auto cmd = command_from(field<std::string>(value, key));
            if (!cmd)
                invalid("command must be one of pointer, ensemble, sweep, estimate");
            c.command = *cmd;
        } else if (key == "kappa") {
            c.kappa = field<double>(value, key);
        } else if (key == "phi") {
            c.phi = field<double>(value, key);
        } else if (key == "width") {
            c.width = field<double>(value, key);
        } else if (key == "beta") {
            c.beta = field<double>(value, key);
        } else if (key == "n-atoms") {
            c.n_atoms = field<int>(value, key);
        } else if (key == "n-photons") {
            c.n_photons = field<int>(value, key);
        } else if (key == "n-trials") {
            c.n_trials = field<std::int64_t>(value, key);
        } else if (key == "fock-dim") {
            c.fock_dim = field<int>(value, key);
        } else if (key == "phi-grid") {
            c.phi_grid = field<std::vector<double>>(value, key);
        } else if (key == "seed") {
            if (!value.is_number_unsigned())
                invalid("config field 'seed' must be an unsigned integer");
            c.master_seed = value.get<std::uint64_t>();
        } else if (key == "out") {
            c.output_path = field<std::string>(value, key);
        } else {
            invalid("unknown config field '" + key + "'");
        }
    }
    return c;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t upto = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        const auto last_nl = text.rfind('\n', upto == 0 ? 0 : upto - 1);
        const auto column = last_nl == std::string::npos ? upto + 1 : upto - last_nl;
        std::ostringstream msg;
        msg << path << ":" << line << ":" << column << ": malformed config: " << e.what();
        throw Error(ErrorCode::parse, msg.str());
    }
    return apply_json(j, std::move(base));
}

ExperimentConfig parse_config(const std::vector<std::string>& args)
{
    CLI::App app{"Weak-value measurement simulator"};
    app.set_version_flag("--version", "wva 1.0.0");

    std::optional<std::string> command, out, config_path, phi_grid;
    std::optional<double> kappa, phi, width, beta;
    std::optional<int> n_atoms, n_photons, fock_dim;
    std::optional<std::int64_t> n_trials;
    std::optional<std::uint64_t> seed;

    app.add_option("--command", command, "pointer | ensemble | sweep | estimate");
    app.add_option("--kappa", kappa, "coupling kappa = chi t / (sqrt(2) w)");
    app.add_option("--phi", phi, "post-selection admixture phi");
    app.add_option("--width", width, "pointer width w");
    app.add_option("--beta", beta, "background click probability per trial");
    app.add_option("--n-atoms", n_atoms, "atoms in the ensemble");
    app.add_option("--n-photons", n_photons, "photons in the write beam");
    app.add_option("--n-trials", n_trials, "Monte Carlo trials");
    app.add_option("--fock-dim", fock_dim, "pointer Fock truncation");
    app.add_option("--phi-grid", phi_grid, "comma-separated phi values for sweep");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out, "output directory");
    app.add_option("--config", config_path, "flat JSON config file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    ExperimentConfig c;
    if (config_path)
        c = load_config_file(*config_path, c);
    if (command) {
        auto cmd = command_from(*command);
        if (!cmd)
            invalid("command must be one of pointer, ensemble, sweep, estimate");
        c.command = *cmd;
    }
    if (kappa) c.kappa = *kappa;
    if (phi) c.phi = *phi;
    if (width) c.width = *width;
    if (beta) c.beta = *beta;
    if (n_atoms) c.n_atoms = *n_atoms;
    if (n_photons) c.n_photons = *n_photons;
    if (n_trials) c.n_trials = *n_trials;
    if (fock_dim) c.fock_dim = *fock_dim;
    if (seed) c.master_seed = *seed;
    if (out) c.output_path = *out;
    if (phi_grid) {
        c.phi_grid.clear();
        std::stringstream ss(*phi_grid);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                c.phi_grid.push_back(std::stod(item, &used));
                if (used != item.size())
                    throw std::invalid_argument(item);
            } catch (const std::exception&) {
                invalid("phi-grid entry '" + item + "' is not a number");
            }
        }
    }
    c.validate();
    return c;
}

} // namespace wva
