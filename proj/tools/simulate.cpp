// Batch experiment runner for the n-source + VBR satellite configuration.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "satsim/config.hpp"
#include "satsim/report.hpp"
#include "satsim/scenario.hpp"

using namespace satsim;

int main(int argc, char** argv) {
    CLI::App app{"TCP over ATM ABR/UBR satellite-link simulator"};

    std::string preset_name, config_file, out_dir = ".", trace_spec;
    std::string scheme_opt, service_opt, vbr_opt;
    int n = -1;
    double feedback_delay = -1, duration = -1, scale = -1;

    app.add_option("--preset", preset_name,
                   "named experiment (table1a..d, table2a..b, table3a..d, ubr5)");
    app.add_option("--config", config_file, "flat key=value config file");
    app.add_option("--n", n, "number of TCP sources");
    app.add_option("--feedback-delay", feedback_delay, "feedback delay in ms (full scale)");
    app.add_option("--scheme", scheme_opt, "erica|erica+");
    app.add_option("--service", service_opt, "abr|ubr");
    app.add_option("--vbr", vbr_opt, "on|off");
    app.add_option("--duration", duration, "simulated duration in RTTs");
    app.add_option("--scale", scale, "divisor applied to rtt and window together");
    app.add_option("--out", out_dir, "output directory (summary + CSVs)");
    app.add_option("--trace", trace_spec, "comma list of queue,acr,cwnd,erica");

    CLI11_PARSE(app, argc, argv);

    ScenarioConfig cfg;
    try {
        if (!preset_name.empty() && !config_file.empty()) {
            throw std::invalid_argument("--preset and --config are mutually exclusive");
        }
        if (!preset_name.empty()) {
            cfg = preset(preset_name);
        } else if (!config_file.empty()) {
            cfg = load_config_file(config_file);
        }
        if (n >= 0) cfg.n_sources = static_cast<std::uint32_t>(n);
        if (feedback_delay >= 0) cfg.feedback_delay_ms = feedback_delay;
        if (!scheme_opt.empty()) apply_setting(cfg, "scheme", scheme_opt);
        if (!service_opt.empty()) apply_setting(cfg, "service", service_opt);
        if (!vbr_opt.empty()) apply_setting(cfg, "vbr", vbr_opt);
        if (duration > 0) cfg.duration_rtts = duration;
        if (scale > 0) cfg.scale = scale;

        if (!trace_spec.empty()) {
            std::stringstream ss(trace_spec);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (item == "queue") cfg.trace.queue = true;
                else if (item == "acr") cfg.trace.acr = true;
                else if (item == "cwnd") cfg.trace.cwnd = true;
                else if (item == "erica") cfg.trace.erica = true;
                else throw std::invalid_argument("unknown trace '" + item + "'");
            }
        }

        if (auto err = cfg.validate(); !err.empty()) {
            throw std::invalid_argument(err);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        RunReport rep = run_scenario(cfg);
        emit_report(rep, cfg, out_dir);
        std::cout << summary_text(rep, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
