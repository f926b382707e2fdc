#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wpmap/errors.hpp"
#include "wpmap/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"warped-product geometry scenario runner"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out";
    std::vector<std::string> overrides;
    long long seed = -1;
    CLI::App* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--set", overrides, "override key=value (repeatable)");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "override the scenario seed");

    CLI::App* list = app.add_subcommand("list", "list catalog names and checks");

    std::string check_name;
    CLI::App* describe = app.add_subcommand("describe", "describe a check");
    describe->add_option("check", check_name, "check name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            std::fputs(wpmap::list_catalog_text().c_str(), stdout);
            return 0;
        }
        if (describe->parsed()) {
            std::printf("%s\n", wpmap::describe_check(check_name).c_str());
            return 0;
        }
        wpmap::Scenario sc = wpmap::parse_scenario_file(scenario_path);
        for (const std::string& o : overrides) wpmap::apply_override(sc, o);
        if (seed >= 0) sc.seed = static_cast<std::uint64_t>(seed);
        wpmap::RunResult res = wpmap::run_scenario(sc, out_dir);
        for (const wpmap::CheckOutcome& c : res.checks)
            std::printf("[%s] %-24s max_residual=%.3e tol=%.3e %s\n",
                        c.passed ? "PASS" : "FAIL", c.name.c_str(), c.max_residual, c.tolerance,
                        c.detail.c_str());
        std::printf("report: %s\n", res.report_path.c_str());
        return res.exit_code;
    } catch (const wpmap::UnknownCheck& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const wpmap::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const wpmap::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
}
