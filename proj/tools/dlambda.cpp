// Command-line scenario runner.

#include "dlambda/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <iostream>
#include <string>
#include <vector>

namespace {

int fail(int code, std::string_view kind, std::string_view message)
{
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Double-Lambda EIT cross-phase modulation scenarios"};
    std::string scenario;
    std::string out = ".";
    std::string formats = "csv,ndjson,svg";
    std::vector<std::string> sets;
    int threads = 0;

    std::vector<std::string> names;
    for (const auto n : dlambda::scenario_names()) names.emplace_back(n);
    app.add_option("--scenario", scenario, "Scenario name")->required()->check(CLI::IsMember(names));
    app.add_option("--out", out, "Output directory")->capture_default_str();
    app.add_option("--format", formats, "Comma separated list of csv, ndjson, svg")
        ->capture_default_str();
    app.add_option("--set", sets, "Parameter override key=value (repeatable)");
    app.add_option("--threads", threads, "OpenMP threads, 0 = runtime default")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "usage", e.what());
    }

    if (threads > 0) omp_set_num_threads(threads);

    try {
        dlambda::RunRequest req;
        req.scenario = scenario;
        req.out_dir = out;
        req.formats = dlambda::parse_formats(formats);
        for (const auto& s : sets) req.overrides.push_back(dlambda::parse_override(s));
        const auto result = dlambda::run_scenario(req);
        for (const auto& line : result.summary) std::cout << line << '\n';
        for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
    } catch (const dlambda::UsageError& e) {
        return fail(2, "usage", e.what());
    } catch (const dlambda::DomainError& e) {
        return fail(1, "domain", e.what());
    }
    return 0;
}
