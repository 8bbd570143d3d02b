#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gda/commands.hpp"
#include "gda/model.hpp"

namespace {

void add_run_options(CLI::App* cmd, gda::RunConfig& c, std::string& kind, std::string& missing) {
    cmd->add_option("--data", c.data, "Input CSV with a header row")->required();
    cmd->add_option("--label-column", c.label_column, "Name of the label column")->required();
    cmd->add_option("--positive-label", c.positive_label, "Label value encoded as class 1")->required();
    cmd->add_option("--on-missing", missing, "Rows with empty cells: reject or drop")
        ->check(CLI::IsMember({"reject", "drop"}))
        ->capture_default_str();
    cmd->add_option("--kind", kind, "Model kind")->check(CLI::IsMember({"lda", "qda"}))->capture_default_str();
    cmd->add_option("--test-fraction", c.test_fraction, "Fraction of rows held out for testing")
        ->capture_default_str();
    cmd->add_option("--seed", c.seed, "Seed of the train/test shuffle")->capture_default_str();
    cmd->add_flag("--standardize", c.standardize, "Standardize features with training statistics");
    cmd->add_option("--out-dir", c.out_dir, "Directory for output files")->capture_default_str();
    cmd->add_option("--ellipse-scale", c.ellipse_scale, "Ellipse size in standard deviations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--category-columns", c.category_columns, "Categorical columns for grouped summaries")
        ->delimiter(',');
    cmd->add_option("--value-column", c.value_column, "Column summarized per category and label");
    cmd->add_option("--projection", c.projection, "Separability plane: 'fisher' or 'feature_a,feature_b'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian discriminant analysis (LDA/QDA) for binary tabular data"};
    app.require_subcommand(1);

    gda::RunConfig config;
    std::string kind = "qda";
    std::string missing = "reject";

    auto* analyze = app.add_subcommand("analyze", "Correlation matrix and grouped five-number summaries");
    auto* fit = app.add_subcommand("fit", "Fit a model on the training partition and save it");
    auto* evaluate = app.add_subcommand("evaluate", "Fit, then report accuracy, confusion matrix, PR and ROC");
    for (auto* cmd : {analyze, fit, evaluate}) add_run_options(cmd, config, kind, missing);
    fit->add_option("--model", config.model_path, "Model output path (default <out-dir>/model.json)");

    gda::PredictConfig predict_config;
    std::string predict_label;
    auto* predict = app.add_subcommand("predict", "Score a CSV with a saved model");
    predict->add_option("--model", predict_config.model, "Model file written by fit")->required();
    predict->add_option("--input", predict_config.input, "CSV of feature rows")->required();
    predict->add_option("--output", predict_config.output, "Predictions CSV")->required();
    predict->add_option("--label-column", predict_label, "Column to ignore if present in the input");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    config.kind = gda::parse_model_kind(kind);
    config.on_missing = missing == "drop" ? gda::MissingPolicy::DropRow : gda::MissingPolicy::Reject;

    if (*analyze) return gda::cmd_analyze(config, std::cout, std::cerr);
    if (*fit) return gda::cmd_fit(config, std::cout, std::cerr);
    if (*evaluate) return gda::cmd_evaluate(config, std::cout, std::cerr);
    if (!predict_label.empty()) predict_config.label_column = predict_label;
    return gda::cmd_predict(predict_config, std::cout, std::cerr);
}
