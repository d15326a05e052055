#include "wmr/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include <Eigen/Dense>

namespace wmr {

namespace {

double mean_of(std::span<const double> v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string cell_context(const ExperimentPlan& plan, int k, std::size_t r) {
    return "plan '" + plan.name + "', dataset '" + plan.dataset_name + "', K=" + std::to_string(k) + ", realization " + std::to_string(r);
}

std::vector<ClassLabel> decisions_for(const FittedRule& rule, const ClassifierOutputs& outputs) {
    std::vector<ClassLabel> out(outputs.n_samples());
    for (std::size_t s = 0; s < outputs.n_samples(); ++s) {
        out[s] = fuse(rule, outputs.soft_row(s), outputs.hard_row(s)).decision;
    }
    return out;
}

}  // namespace

void validate_plan(const ExperimentPlan& plan) {
    const std::string where = "plan '" + plan.name + "': ";
    if (plan.train_size == 0 || plan.test_size == 0) throw ContractError(where + "train/test sizes must be positive");
    if (!(plan.validation_fraction > 0.0 && plan.validation_fraction < 1.0)) {
        throw ContractError(where + "validation_fraction must lie in (0,1)");
    }
    const auto n_val = static_cast<std::size_t>(std::lround(plan.validation_fraction * static_cast<double>(plan.train_size)));
    if (n_val == 0 || n_val >= plan.train_size) {
        throw ContractError(where + "validation_fraction leaves an empty validation or member-training slice");
    }
    if (plan.k_splits.empty()) throw ContractError(where + "no k_splits given");
    for (int k : plan.k_splits) {
        if (k < 1) throw ContractError(where + "k_splits entries must be positive");
    }
    if (plan.rules.empty()) throw ContractError(where + "no combination rules given");
    for (std::size_t i = 0; i < plan.rules.size(); ++i) {
        for (std::size_t j = i + 1; j < plan.rules.size(); ++j) {
            if (plan.rules[i] == plan.rules[j]) throw ContractError(where + "duplicate rule " + to_string(plan.rules[i]));
        }
    }
    if (plan.n_realizations == 0) throw ContractError(where + "n_realizations must be positive");
    if (const auto* w = std::get_if<WknnParams>(&plan.classifier)) {
        if (w->k < 1) throw ContractError(where + "k-NN k must be positive");
        if (w->distance == DistanceMetric::Minkowski && !(std::isfinite(w->minkowski_p) && w->minkowski_p > 0.0)) {
            throw ContractError(where + "Minkowski exponent must be finite and positive");
        }
    } else if (std::get<CartParams>(plan.classifier).min_split < 2) {
        throw ContractError(where + "min_split must be at least 2");
    }
}

RealizationSplit split_indices(std::size_t n, const ExperimentPlan& plan, std::size_t realization_index) {
    validate_plan(plan);
    if (plan.train_size + plan.test_size > n) {
        throw DataError("plan '" + plan.name + "' needs " + std::to_string(plan.train_size + plan.test_size) +
                        " samples, dataset has " + std::to_string(n));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::seed_seq seq{static_cast<std::uint32_t>(plan.rng_seed), static_cast<std::uint32_t>(plan.rng_seed >> 32),
                      static_cast<std::uint32_t>(realization_index), 0x5eedu};
    std::mt19937_64 rng(seq);
    std::shuffle(perm.begin(), perm.end(), rng);

    const auto n_val = static_cast<std::size_t>(std::lround(plan.validation_fraction * static_cast<double>(plan.train_size)));
    const std::size_t n_member = plan.train_size - n_val;
    RealizationSplit split;
    split.member_train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_member));
    split.validation.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_member),
                            perm.begin() + static_cast<std::ptrdiff_t>(plan.train_size));
    split.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(plan.train_size),
                      perm.begin() + static_cast<std::ptrdiff_t>(plan.train_size + plan.test_size));
    return split;
}

SplitData split_realization(const Dataset& data, const ExperimentPlan& plan, std::size_t realization_index) {
    const auto idx = split_indices(data.size(), plan, realization_index);
    return {data.subset(idx.member_train, data.name() + ":train"),
            data.subset(idx.validation, data.name() + ":validation"),
            data.subset(idx.test, data.name() + ":test")};
}

double accuracy(std::span<const ClassLabel> predictions, std::span<const ClassLabel> truth) {
    if (predictions.size() != truth.size()) throw ContractError("accuracy: length mismatch");
    if (truth.empty()) throw ContractError("accuracy of an empty set");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predictions[i] == truth[i] ? 1 : 0;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(truth.size());
}

RealizationResult run_realization(const Dataset& data, const ExperimentPlan& plan, int k,
                                  std::size_t realization_index) {
    const auto split = split_realization(data, plan, realization_index);
    if (!split.train.has_both_classes()) throw DataError("member-training slice lacks a class");
    if (static_cast<std::size_t>(k) > data.dimension()) {
        throw ContractError("K=" + std::to_string(k) + " exceeds dataset dimension " + std::to_string(data.dimension()));
    }

    RealizationResult result;
    result.index = realization_index;
    result.k = k;
    result.partition = fair_partition(rank_features(split.train), static_cast<std::size_t>(k));
    for (const auto& group : result.partition.groups) {
        result.members.push_back(train_classifier(split.train, group, plan.classifier));
    }

    const auto validation_out = ensemble_outputs(result.members, split.validation);
    result.fit = fit_validation(validation_out, split.validation.labels(), plan.lae_bins);

    const auto test_out = ensemble_outputs(result.members, split.test);
    const auto& truth = split.test.labels();
    std::size_t member_hits = 0;
    for (std::size_t i = 0; i < result.members.size(); ++i) {
        std::vector<ClassLabel> votes(test_out.n_samples());
        for (std::size_t s = 0; s < votes.size(); ++s) {
            votes[s] = test_out.hard(s, i);
            member_hits += votes[s] == truth[s] ? 1 : 0;
        }
        result.member_accuracies.push_back(accuracy(votes, truth));
    }
    // pooled hit count: equals each member's accuracy exactly when all members agree
    result.member_mean_accuracy = 100.0 * static_cast<double>(member_hits) /
                                  static_cast<double>(result.members.size() * truth.size());
    for (RuleKind kind : plan.rules) {
        result.rule_accuracies[kind] = accuracy(decisions_for(make_rule(kind, result.fit), test_out), truth);
    }
    return result;
}

std::vector<CellResult> run_cell(const Dataset& data, const ExperimentPlan& plan, int k, const CellOptions& options) {
    validate_plan(plan);
    const std::size_t n = plan.n_realizations;
    std::vector<double> member_mean(n), member_max(n);
    std::vector<std::map<RuleKind, double>> rule_acc(n);

    parallel_for(n, options.jobs, [&](std::size_t r) {
        RealizationResult res;
        try {
            res = run_realization(data, plan, k, r);
        } catch (const std::exception& e) {
            throw DataError(cell_context(plan, k, r) + ": " + e.what());
        }
        member_mean[r] = res.member_mean_accuracy;
        member_max[r] = *std::max_element(res.member_accuracies.begin(), res.member_accuracies.end());
        rule_acc[r] = res.rule_accuracies;
        if (options.on_realization) options.on_realization(res);
    });

    std::vector<CellResult> cells;
    for (RuleKind kind : plan.rules) {
        std::vector<double> acc(n);
        for (std::size_t r = 0; r < n; ++r) acc[r] = rule_acc[r].at(kind);
        CellResult cell;
        cell.dataset = plan.dataset_name;
        cell.classifier = to_string(kind_of(plan.classifier));
        cell.k = k;
        cell.rule = kind;
        cell.ensemble_accuracy = mean_of(acc);
        cell.member_mean_accuracy = mean_of(member_mean);
        cell.member_mean_accuracy_sd = sample_sd(member_mean);
        cell.member_max_accuracy = mean_of(member_max);
        cell.member_max_accuracy_sd = sample_sd(member_max);
        cell.mean_improvement = cell.ensemble_accuracy - cell.member_mean_accuracy;
        cell.realizations = n;
        cells.push_back(cell);
    }
    return cells;
}

double single_classifier_accuracy(const Dataset& data, const ExperimentPlan& plan, std::size_t realization_index) {
    const auto idx = split_indices(data.size(), plan, realization_index);
    std::vector<std::size_t> train_idx = idx.member_train;
    train_idx.insert(train_idx.end(), idx.validation.begin(), idx.validation.end());
    const auto train = data.subset(train_idx);
    const auto test = data.subset(idx.test);

    std::vector<std::size_t> all(data.dimension());
    std::iota(all.begin(), all.end(), 0);
    const auto model = train_classifier(train, all, plan.classifier);
    std::vector<ClassLabel> pred(test.size());
    for (std::size_t s = 0; s < test.size(); ++s) pred[s] = model.predict(test.sample(s)).hard;
    return accuracy(pred, test.labels());
}

RankingTable wborda_rank(std::vector<CellResult> cells) {
    std::stable_sort(cells.begin(), cells.end(), [](const CellResult& a, const CellResult& b) {
        const ColumnKey ka{a.dataset, a.classifier, a.k}, kb{b.dataset, b.classifier, b.k};
        if (ka != kb) return ka < kb;
        return a.rule < b.rule;
    });

    RankingTable table;
    std::map<RuleKind, std::vector<double>> per_rule;
    for (std::size_t begin = 0; begin < cells.size();) {
        const ColumnKey key{cells[begin].dataset, cells[begin].classifier, cells[begin].k};
        std::size_t end = begin;
        while (end < cells.size() && ColumnKey{cells[end].dataset, cells[end].classifier, cells[end].k} == key) ++end;

        std::vector<double> distinct;
        for (std::size_t i = begin; i < end; ++i) {
            if (i > begin && cells[i].rule == cells[i - 1].rule) {
                throw ContractError("rule " + std::string(to_string(cells[i].rule)) + " appears twice in column " +
                                    key.dataset + "/" + key.classifier + "/K=" + std::to_string(key.k));
            }
            distinct.push_back(cells[i].mean_improvement);
        }
        std::sort(distinct.begin(), distinct.end(), std::greater<>());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

        for (std::size_t i = begin; i < end; ++i) {
            const auto pos = std::find(distinct.begin(), distinct.end(), cells[i].mean_improvement) - distinct.begin();
            const int points = kTopBordaPoints - static_cast<int>(pos);
            table.points.push_back({key, cells[i].rule, points});
            per_rule[cells[i].rule].push_back(points);
        }
        begin = end;
    }

    for (const auto& [rule, pts] : per_rule) {
        RuleTotal t;
        t.rule = rule;
        t.sum = static_cast<int>(std::lround(std::accumulate(pts.begin(), pts.end(), 0.0)));
        t.mean = mean_of(pts);
        t.stdev = sample_sd(pts);
        t.columns = pts.size();
        table.totals.push_back(t);
    }
    std::stable_sort(table.totals.begin(), table.totals.end(),
                     [](const RuleTotal& a, const RuleTotal& b) { return a.sum > b.sum; });
    table.cells = std::move(cells);
    return table;
}

double bhattacharyya_distance(const Dataset& data) {
    if (!data.has_both_classes()) throw DataError("Bhattacharyya distance needs both classes");
    const auto d = static_cast<Eigen::Index>(data.dimension());

    auto class_stats = [&](ClassLabel label) {
        const auto n = static_cast<Eigen::Index>(data.count(label));
        Eigen::MatrixXd x(n, d);
        Eigen::Index row = 0;
        for (std::size_t s = 0; s < data.size(); ++s) {
            if (data.label(s) != label) continue;
            for (Eigen::Index j = 0; j < d; ++j) x(row, j) = data.sample(s)[static_cast<std::size_t>(j)];
            ++row;
        }
        const Eigen::VectorXd mean = x.colwise().mean().transpose();
        x.rowwise() -= mean.transpose();
        Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
        double lambda = 1e-6 * cov.trace() / static_cast<double>(d);
        if (!(lambda > 0.0)) lambda = 1e-12;
        cov.diagonal().array() += lambda;
        return std::pair{mean, cov};
    };
    auto log_det = [](const Eigen::MatrixXd& m) { return m.ldlt().vectorD().array().log().sum(); };

    const auto [mu1, cov1] = class_stats(ClassLabel::Omega1);
    const auto [mu2, cov2] = class_stats(ClassLabel::Omega2);
    const Eigen::MatrixXd avg = (cov1 + cov2) / 2.0;
    const Eigen::VectorXd diff = mu2 - mu1;
    const double mahal = diff.dot(avg.ldlt().solve(diff));
    const double dist = mahal / 8.0 + 0.5 * (log_det(avg) - 0.5 * (log_det(cov1) + log_det(cov2)));
    return std::max(0.0, dist);
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::size_t first_error_index = count;
    {
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < std::min(jobs, count); ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (i < first_error_index) {
                            first_error_index = i;
                            first_error = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wmr
