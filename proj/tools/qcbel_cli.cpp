// Command-line front end: validate and run named scenarios from a sectioned
// key=value config, or list the registry.
//
// Exit codes: 0 success, 2 configuration/validation error, 3 numerical
// failure during a run.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "qcbel/scenario.hpp"
#include "qcbel/solver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"quasiconformal mapping toolkit"};
    app.require_subcommand(1);

    std::string config_path, filter;
    CLI::App* run = app.add_subcommand("run", "execute the scenario named in a config");
    run->add_option("config", config_path, "config file path")->required();
    CLI::App* validate =
        app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", config_path, "config file path")->required();
    CLI::App* list = app.add_subcommand("list", "list registered scenarios");
    list->add_option("filter", filter, "substring filter");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            std::cout << qcbel::list_scenarios(filter);
            return 0;
        }
        qcbel::Config cfg = qcbel::Config::parse_file(config_path);
        if (validate->parsed()) {
            qcbel::validate_config(cfg);
            std::cout << "ok\n";
            return 0;
        }
        const char* env_root = std::getenv("QCBEL_OUTPUT_ROOT");
        qcbel::run_config(cfg, env_root ? env_root : "");
        return 0;
    } catch (const qcbel::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qcbel::NoConvergence& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
