#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "multiroot/errors.hpp"
#include "multiroot/io.hpp"
#include "multiroot/run.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

} // namespace

int main(int argc, char** argv)
{
    using namespace multiroot;

    CLI::App app{"multiroot: multiple solutions of semilinear elliptic systems"};
    app.require_subcommand(1);

    std::string config_path;
    auto* solve_cmd = app.add_subcommand("solve", "deflated multi-solution search; writes results to `output`");
    solve_cmd->add_option("config", config_path, "run configuration file")->required();

    std::string compare_config;
    std::string methods = "lm,newton";
    std::string table_out;
    auto* compare_cmd = app.add_subcommand("compare", "||F|| per iteration for each method and preset guess");
    compare_cmd->add_option("config", compare_config, "run configuration file")->required();
    compare_cmd->add_option("--methods", methods, "comma-separated subset of lm,newton");
    compare_cmd->add_option("--output", table_out, "write the CSV here instead of stdout");

    std::string jac_config;
    auto* jac_cmd = app.add_subcommand("check-jacobian", "analytic vs finite-difference Jacobians");
    jac_cmd->add_option("config", jac_config, "run configuration file")->required();

    std::string solution_path;
    int resolution = 201;
    std::string grid_out;
    auto* grid_cmd = app.add_subcommand("export-grid", "uniform-grid values of a stored solution");
    grid_cmd->add_option("solution", solution_path, "a solutions/<k>.coeffs.csv file")->required();
    grid_cmd->add_option("--resolution", resolution, "points per direction")->check(CLI::Range(2, 100000));
    grid_cmd->add_option("--output", grid_out, "write the CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kConfigError;
    }

    try {
        if (*solve_cmd) {
            return run(parse_config(config_path), std::cout);
        }
        if (*compare_cmd) {
            const RunConfig cfg = parse_config(compare_config);
            std::vector<Method> ms;
            std::stringstream ss(methods);
            for (std::string m; std::getline(ss, m, ',');) {
                if (!m.empty()) {
                    ms.push_back(parse_method(m));
                }
            }
            const std::string csv = comparison_table(cfg, ms, cfg.compare_iters).to_csv();
            if (table_out.empty()) {
                std::cout << csv;
            } else {
                write_file_atomic(table_out, csv);
            }
            return 0;
        }
        if (*jac_cmd) {
            const JacobianReport rep = check_jacobian(parse_config(jac_config));
            std::cout << "points " << rep.points << "\n"
                      << "max relative deviation (base)     " << rep.base << "\n"
                      << "max relative deviation (deflated) " << rep.deflated << "\n"
                      << (rep.pass ? "PASS" : "FAIL") << "\n";
            return rep.pass ? 0 : kNumericalError;
        }
        if (*grid_cmd) {
            const std::string csv = export_grid(solution_path, resolution);
            if (grid_out.empty()) {
                std::cout << csv;
            } else {
                write_file_atomic(grid_out, csv);
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    }
    return 0;
}
