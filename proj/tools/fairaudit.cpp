#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "fairaudit/audit.hpp"
#include "fairaudit/berk.hpp"
#include "fairaudit/io.hpp"
#include "fairaudit/synthetic.hpp"

namespace fa = fairaudit;

namespace {

struct CommonFlags {
    fa::AuditConfig config;
    std::string target_col = "y";
    std::string score_col = "s";
    std::string sensitive_col = "a";
    std::string out;
};

void add_config_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--folds", f.config.n_folds, "cross-validation folds")->capture_default_str();
    cmd->add_option("--basis", f.config.n_basis, "RBF basis functions per classifier")
        ->capture_default_str();
    cmd->add_option("--l2", f.config.l2_strength, "classifier L2 penalty")->capture_default_str();
    cmd->add_option("--epsilon", f.config.clamp_epsilon, "probability clamp")->capture_default_str();
    cmd->add_option("--seed", f.config.seed, "RNG seed")->capture_default_str();
    cmd->add_flag("--held-in", f.config.held_in, "fit and evaluate on the same rows (no CV)");
    cmd->add_flag("--clamp-nmi", f.config.clamp_negative_nmi,
                  "clamp negative NMI values to 0 for presentation");
}

void add_column_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--target-col", f.target_col, "target column name")->capture_default_str();
    cmd->add_option("--score-col", f.score_col, "score column name")->capture_default_str();
    cmd->add_option("--sensitive-col", f.sensitive_col, "sensitive column name")
        ->capture_default_str();
}

long column_index(const fa::Csv& csv, const std::string& name) {
    for (std::size_t j = 0; j < csv.header.size(); ++j)
        if (csv.header[j] == name) return static_cast<long>(j);
    throw fa::data_error("column '" + name + "' not found in the CSV header");
}

fa::AuditDataset dataset_from_csv(const fa::Csv& csv, const CommonFlags& f, int folds) {
    const long yc = column_index(csv, f.target_col);
    const long sc = column_index(csv, f.score_col);
    const long ac = column_index(csv, f.sensitive_col);
    Eigen::MatrixXd y(static_cast<long>(csv.rows.size()), 1);
    Eigen::MatrixXd s(static_cast<long>(csv.rows.size()), 1);
    std::vector<std::string> a;
    a.reserve(csv.rows.size());
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const std::string ctx = "row " + std::to_string(i + 2);
        y(static_cast<long>(i), 0) = fa::parse_double(csv.rows[i][yc], ctx + " " + f.target_col);
        s(static_cast<long>(i), 0) = fa::parse_double(csv.rows[i][sc], ctx + " " + f.score_col);
        a.push_back(csv.rows[i][ac]);
    }
    return fa::validate_dataset(y, s, a, folds);
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty())
        std::cout << content;
    else
        fa::write_file(path, content);
}

int run(int argc, char** argv) {
    CLI::App app{"fairness audit toolkit for regression scores"};
    app.require_subcommand(1);

    // audit
    CommonFlags af;
    std::string audit_path;
    CLI::App* audit = app.add_subcommand("audit", "audit a (target, score, sensitive) CSV");
    audit->add_option("--data", audit_path, "input CSV with a header row")->required();
    add_column_flags(audit, af);
    add_config_flags(audit, af);
    audit->add_option("--out", af.out, "report JSON path (default: stdout)");

    // simulate
    CommonFlags sf;
    std::string kind_name = "fair";
    long sim_n = 1000;
    double sim_p1 = 0.7;
    std::string data_out, plot_out;
    CLI::App* simulate = app.add_subcommand("simulate", "generate a scenario, audit it, export data");
    simulate->add_option("--kind", kind_name, "fair | score_mean | target_mean | score_variance")
        ->capture_default_str();
    simulate->add_option("--n", sim_n, "sample size")->capture_default_str();
    simulate->add_option("--p1", sim_p1, "P(a = 1)")->capture_default_str();
    add_column_flags(simulate, sf);
    add_config_flags(simulate, sf);
    simulate->add_option("--out", sf.out, "report JSON path (default: stdout)");
    simulate->add_option("--data-out", data_out, "dataset CSV path");
    simulate->add_option("--plot-out", plot_out, "plot-data CSV path");

    // sweep
    CommonFlags wf;
    std::string sweep_data, communities;
    double lo = 1e-4, hi = 1e2;
    int grid_n = 16;
    bool no_zero = false;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "fairness-regularizer sweep: fit per lambda, audit held-out scores");
    CLI::Option* od = sweep_cmd->add_option("--data", sweep_data,
                                            "regression CSV: target + sensitive columns, "
                                            "every other numeric column is a feature");
    CLI::Option* oc = sweep_cmd->add_option("--communities", communities,
                                            "UCI Communities and Crime file");
    od->excludes(oc);
    sweep_cmd->add_option("--lambda-min", lo, "smallest nonzero lambda")->capture_default_str();
    sweep_cmd->add_option("--lambda-max", hi, "largest lambda")->capture_default_str();
    sweep_cmd->add_option("--lambda-count", grid_n, "log-spaced grid size")->capture_default_str();
    sweep_cmd->add_flag("--no-zero", no_zero, "drop the lambda = 0 grid point");
    add_column_flags(sweep_cmd, wf);
    add_config_flags(sweep_cmd, wf);
    sweep_cmd->add_option("--out", wf.out, "sweep CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (audit->parsed()) {
            const fa::Csv csv = fa::read_csv(audit_path);
            const fa::AuditDataset ds = dataset_from_csv(csv, af, af.config.n_folds);
            const fa::FairnessReport report = fa::run_audit(ds, af.config);
            emit(af.out, fa::report_json(report, af.config));
        } else if (simulate->parsed()) {
            fa::ScenarioSpec spec;
            spec.kind = fa::scenario_from_name(kind_name);
            spec.n = sim_n;
            spec.p_a1 = sim_p1;
            spec.seed = sf.config.seed;
            const fa::AuditDataset ds = fa::generate(spec);
            const fa::FairnessReport report = fa::run_audit(ds, sf.config);
            if (!data_out.empty())
                fa::write_file(data_out,
                               fa::dataset_csv(ds, sf.target_col, sf.score_col, sf.sensitive_col));
            if (!plot_out.empty()) fa::write_file(plot_out, fa::plot_csv(ds));
            emit(sf.out, fa::report_json(report, sf.config));
        } else {
            fa::TrainingSet ts;
            if (!communities.empty()) {
                ts = fa::load_communities(communities);
            } else if (!sweep_data.empty()) {
                const fa::Csv csv = fa::read_csv(sweep_data);
                const long yc = column_index(csv, wf.target_col);
                const long ac = column_index(csv, wf.sensitive_col);
                std::vector<long> fcols;
                for (long j = 0; j < static_cast<long>(csv.header.size()); ++j)
                    if (j != yc && j != ac) fcols.push_back(j);
                if (fcols.empty()) throw fa::data_error("no feature columns");
                Eigen::MatrixXd x(static_cast<long>(csv.rows.size()), static_cast<long>(fcols.size()));
                Eigen::VectorXd y(static_cast<long>(csv.rows.size()));
                std::vector<int> a;
                std::vector<std::string> names;
                for (long j : fcols) names.push_back(csv.header[j]);
                for (std::size_t i = 0; i < csv.rows.size(); ++i) {
                    const std::string ctx = "row " + std::to_string(i + 2);
                    y(static_cast<long>(i)) = fa::parse_double(csv.rows[i][yc], ctx);
                    const double av = fa::parse_double(csv.rows[i][ac], ctx);
                    if (av != 0.0 && av != 1.0)
                        throw fa::data_error(ctx + ": sensitive value must be 0 or 1 for sweeps");
                    a.push_back(static_cast<int>(av));
                    for (std::size_t c = 0; c < fcols.size(); ++c)
                        x(static_cast<long>(i), static_cast<long>(c)) =
                            fa::parse_double(csv.rows[i][fcols[c]], ctx);
                }
                ts = fa::make_training_set(x, y, a, std::move(names));
            } else {
                throw fa::data_error("sweep needs --data or --communities");
            }
            const std::vector<double> grid = fa::default_lambda_grid(lo, hi, grid_n, !no_zero);
            const fa::SweepResult result = fa::sweep(ts, grid, wf.config);
            emit(wf.out, fa::sweep_csv(result));
        }
    } catch (const fa::data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
