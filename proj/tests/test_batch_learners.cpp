#include <cmath>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "nidsbench/decision_tree.hpp"
#include "nidsbench/knn.hpp"
#include "nidsbench/learners.hpp"
#include "nidsbench/linear_svm.hpp"
#include "nidsbench/mlp.hpp"
#include "nidsbench/naive_bayes.hpp"
#include "nidsbench/pipeline.hpp"
#include "nidsbench/preprocess.hpp"
#include "nidsbench/sampling.hpp"

using namespace nidsbench;

namespace {

double training_accuracy(const BatchModel& m, const Dataset& ds) {
  std::size_t hit = 0;
  for (const auto& x : ds.instances) hit += m.predict(x) == x.label ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(ds.size());
}

/// Two continuous attributes; the class is x0 > 0.5 (x1 is noise).
Dataset threshold_concept(std::size_t n, std::uint64_t seed) {
  Dataset ds;
  ds.schema.attributes = {Attribute{"x0", AttributeKind::numeric, {}}, Attribute{"x1", AttributeKind::numeric, {}}};
  ds.schema.class_labels = {"neg", "pos"};
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = rng.uniform(), x1 = rng.uniform();
    ds.instances.push_back({{x0, x1}, x0 > 0.5 ? 1 : 0});
  }
  return ds;
}

double entropy_of(const std::vector<double>& c) {
  const double n = std::accumulate(c.begin(), c.end(), 0.0);
  double h = 0;
  for (double v : c)
    if (v > 0) h -= v / n * std::log2(v / n);
  return h;
}

} // namespace

// ---------------------------------------------------------------- Naive Bayes

TEST(NaiveBayes, ScoresMatchHandFormula) {
  const Dataset ds = fixtures::mixed_dataset();
  NaiveBayes nb;
  nb.fit(ds);
  const Instance q{{1, 60.0, 0.5}, -1};
  const auto scores = nb.predict_scores(q);

  // Brute force: prior * Laplace(nominal) * Gaussian(numeric, sample variance).
  for (int c = 0; c < 2; ++c) {
    std::vector<const Instance*> rows;
    for (const auto& x : ds.instances)
      if (x.label == c) rows.push_back(&x);
    const double nc = static_cast<double>(rows.size());
    double expect = std::log(nc / static_cast<double>(ds.size()));
    double hit = 0;
    for (auto* r : rows) hit += r->values[0] == q.values[0] ? 1 : 0;
    expect += std::log((hit + 1) / (nc + 3));
    for (int j = 1; j <= 2; ++j) {
      double mean = 0, ss = 0;
      for (auto* r : rows) mean += r->values[static_cast<std::size_t>(j)];
      mean /= nc;
      for (auto* r : rows) ss += std::pow(r->values[static_cast<std::size_t>(j)] - mean, 2);
      const double var = ss / (nc - 1);
      const double z = q.values[static_cast<std::size_t>(j)] - mean;
      expect += std::log(std::exp(-z * z / (2 * var)) / std::sqrt(2 * M_PI * var));
    }
    EXPECT_NEAR(scores[static_cast<std::size_t>(c)], expect, 1e-9 * std::abs(expect));
  }
}

TEST(NaiveBayes, SeparatesMixedData) {
  const Dataset ds = fixtures::mixed_dataset();
  NaiveBayes nb;
  nb.fit(ds);
  EXPECT_EQ(training_accuracy(nb, ds), 1.0);
}

TEST(NaiveBayes, VarianceFloorKeepsConstantAttributesFinite) {
  Dataset ds = fixtures::mixed_dataset();
  for (auto& x : ds.instances) x.values[2] = 0.5;
  NaiveBayes nb;
  nb.fit(ds);
  for (double s : nb.predict_scores(ds.instances[0])) EXPECT_TRUE(std::isfinite(s));
}

// ---------------------------------------------------------------- decision tree

TEST(DecisionTree, PessimisticErrorsMatchClosedForm) {
  // No observed errors: n (1 - CF^(1/n)).
  EXPECT_NEAR(pessimistic_extra_errors(6, 0, 0.25), 6 * (1 - std::pow(0.25, 1.0 / 6)), 1e-12);
  // Wilson-style upper bound with continuity correction for e >= 1.
  const double n = 20, e = 3, z = 0.6744897501960817;
  const double f = (e + 0.5) / n;
  const double r = (f + z * z / (2 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n);
  EXPECT_NEAR(pessimistic_extra_errors(n, e, 0.25), r * n - e, 1e-9);
}

TEST(DecisionTree, NormalQuantile) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(0.75), 0.6744897501960817, 1e-12);
  EXPECT_NEAR(normal_quantile(0.001), -3.090232306167813, 1e-10);
  EXPECT_THROW(normal_quantile(1.0), std::domain_error);
}

TEST(DecisionTree, EntropyOfCounts) {
  const std::vector<double> even{5, 5}, pure{0, 7};
  EXPECT_DOUBLE_EQ(entropy(even), 1.0);
  EXPECT_DOUBLE_EQ(entropy(pure), 0.0);
}

TEST(DecisionTree, UnprunedTreeFitsContinuousDataExactly) {
  const Dataset ds = threshold_concept(300, 4);
  Dataset noisy = ds;
  Rng rng(9);
  for (auto& x : noisy.instances)
    if (rng.uniform() < 0.1) x.label = 1 - x.label;
  TreeConfig cfg;
  cfg.pruning_confidence.reset();
  cfg.min_leaf_instances = 1;
  DecisionTree tree(cfg);
  tree.fit(noisy);
  EXPECT_EQ(training_accuracy(tree, noisy), 1.0);
}

TEST(DecisionTree, RootMatchesBruteForceGainRatio) {
  // Candidate oracle: best threshold per numeric attribute by gain, then the
  // highest gain ratio among attributes whose gain is at least average.
  const Dataset ds = threshold_concept(200, 12);
  const std::size_t n = ds.size();
  std::vector<double> parent(2, 0);
  for (const auto& x : ds.instances) parent[static_cast<std::size_t>(x.label)] += 1;
  std::vector<double> gains, ratios;
  for (std::size_t j = 0; j < 2; ++j) {
    double best_gain = -1, best_ratio = 0;
    std::vector<double> values;
    for (const auto& x : ds.instances) values.push_back(x.values[j]);
    std::sort(values.begin(), values.end());
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double t = 0.5 * (values[i] + values[i + 1]);
      std::vector<double> l(2, 0), r(2, 0);
      for (const auto& x : ds.instances) (x.values[j] <= t ? l : r)[static_cast<std::size_t>(x.label)] += 1;
      const double nl = l[0] + l[1], nr = r[0] + r[1];
      if (nl < 2 || nr < 2) continue;
      const double gain = entropy_of(parent) - nl / n * entropy_of(l) - nr / n * entropy_of(r);
      if (gain > best_gain) {
        best_gain = gain;
        best_ratio = gain / entropy_of({nl, nr});
      }
    }
    gains.push_back(best_gain);
    ratios.push_back(best_ratio);
  }
  const double avg = (gains[0] + gains[1]) / 2;
  std::size_t expect = 0;
  double top = -1;
  for (std::size_t j = 0; j < 2; ++j)
    if (gains[j] >= avg - 1e-3 && ratios[j] > top) {
      top = ratios[j];
      expect = j;
    }
  DecisionTree tree;
  tree.fit(ds);
  EXPECT_EQ(tree.root_attribute(), expect);
  EXPECT_GE(training_accuracy(tree, ds), 0.99);
}

TEST(DecisionTree, NominalMultiwaySplit) {
  // Class decided by the nominal attribute (values 0,1 -> c0; 2 -> c1).
  Dataset ds;
  ds.schema.attributes = {Attribute{"noise", AttributeKind::numeric, {}},
                          Attribute{"key", AttributeKind::nominal, {"a", "b", "c"}}};
  ds.schema.class_labels = {"c0", "c1"};
  Rng rng(2);
  for (int i = 0; i < 90; ++i) {
    const int key = i % 3;
    ds.instances.push_back({{rng.uniform(), static_cast<double>(key)}, key == 2 ? 1 : 0});
  }
  DecisionTree tree;
  tree.fit(ds);
  EXPECT_EQ(tree.root_attribute(), 1u);
  EXPECT_EQ(tree.leaf_count(), 3u);
  EXPECT_EQ(training_accuracy(tree, ds), 1.0);
}

TEST(DecisionTree, PruningShrinksNoiseFit) {
  Dataset ds = threshold_concept(400, 8);
  Rng rng(5);
  for (auto& x : ds.instances)
    if (rng.uniform() < 0.15) x.label = 1 - x.label;
  TreeConfig unpruned;
  unpruned.pruning_confidence.reset();
  DecisionTree big(unpruned), small;
  big.fit(ds);
  small.fit(ds);
  EXPECT_LT(small.leaf_count(), big.leaf_count());
}

// ---------------------------------------------------------------- k-NN

TEST(Knn, DistanceTableMatchesFormula) {
  const Dataset ds = fixtures::mixed_dataset();
  MixedPoints pts(ds.schema);
  for (std::size_t i = 0; i < ds.size(); ++i) pts.set(i, ds.instances[i]);
  const Instance q{{0, 100.0, 0.3}, -1};
  const Eigen::VectorXd d = pts.distances(q);
  ASSERT_EQ(d.size(), static_cast<Eigen::Index>(ds.size()));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& v = ds.instances[i].values;
    const double expect =
        std::sqrt(std::pow(v[1] - 100.0, 2) + std::pow(v[2] - 0.3, 2)) + (v[0] == 0 ? 0.0 : 1.0);
    EXPECT_NEAR(d(static_cast<Eigen::Index>(i)), expect, 1e-12) << "row " << i;
  }
}

TEST(Knn, TiesGoToEarlierTrainingInstance) {
  Dataset ds;
  ds.schema.attributes = {Attribute{"x", AttributeKind::numeric, {}}};
  ds.schema.class_labels = {"a", "b"};
  ds.instances = {{{1.0}, 1}, {{-1.0}, 0}, {{5.0}, 0}};
  Knn knn(KnnConfig{1, 0, 1});
  knn.fit(ds);
  EXPECT_EQ(knn.predict(Instance{{0.0}, -1}), 1);
}

TEST(Knn, VoteFavoursCountThenDistance) {
  const std::vector<Neighbor> nb{{0.1, 0, 1}, {0.2, 1, 0}, {0.3, 2, 0}};
  const auto s = knn_vote(nb, 2);
  EXPECT_GT(s[0], s[1]);
  const std::vector<Neighbor> tie{{0.1, 0, 1}, {0.2, 1, 0}};
  const auto t = knn_vote(tie, 2);
  EXPECT_GT(t[1], t[0]);
}

TEST(Knn, RejectsKLargerThanTrainingSet) {
  Knn knn(KnnConfig{5, 0, 1});
  Dataset ds = fixtures::mixed_dataset();
  ds.instances.resize(3);
  EXPECT_THROW(knn.fit(ds), std::invalid_argument);
}

TEST(Knn, StratifiedSubsampleKeepsProportions) {
  std::vector<int> labels;
  for (int i = 0; i < 1000; ++i) labels.push_back(i % 10 == 0 ? 1 : 0);
  const auto rows = stratified_subsample(labels, 200, 3);
  ASSERT_EQ(rows.size(), 200u);
  std::size_t ones = 0;
  for (auto r : rows) ones += labels[r] == 1 ? 1 : 0;
  EXPECT_EQ(ones, 20u);
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
  EXPECT_EQ(rows, stratified_subsample(labels, 200, 3));

  Knn knn(KnnConfig{3, 50, 1});
  const Dataset ds = threshold_concept(400, 1);
  knn.fit(ds);
  EXPECT_EQ(knn.training_size(), 50u);
}

TEST(Knn, LearnsThresholdConcept) {
  const Dataset train = threshold_concept(500, 2), test = threshold_concept(200, 3);
  Knn knn;
  knn.fit(train);
  EXPECT_GT(training_accuracy(knn, test), 0.93);
}

// ---------------------------------------------------------------- MLP

template <typename Scalar>
void check_gradient(double tol) {
  using Net = MlpNetwork<Scalar>;
  Net net(2, 2, 2);
  Rng rng(17);
  net.randomize(rng, 0.8);
  typename Net::Vector x(2), t(2);
  x << Scalar(0.3), Scalar(-0.7);
  t << Scalar(1), Scalar(0);
  const auto analytic = Net::flatten(net.gradient(x, t));
  const auto p0 = net.parameters();
  const Scalar h = std::is_same_v<Scalar, float> ? Scalar(1e-2) : Scalar(1e-6);
  for (Eigen::Index i = 0; i < p0.size(); ++i) {
    auto p = p0;
    p(i) += h;
    net.set_parameters(p);
    const Scalar up = net.loss(x, t);
    p(i) -= 2 * h;
    net.set_parameters(p);
    const Scalar down = net.loss(x, t);
    const double numeric = static_cast<double>((up - down) / (2 * h));
    const double a = static_cast<double>(analytic(i));
    const double scale = std::max({std::abs(a), std::abs(numeric), 1e-8});
    EXPECT_LT(std::abs(a - numeric) / scale, tol) << "parameter " << i << " analytic " << a << " numeric " << numeric;
  }
  net.set_parameters(p0);
  EXPECT_EQ(net.parameters(), p0);
}

TEST(Mlp, GradientMatchesFiniteDifferencesDouble) { check_gradient<double>(1e-4); }
TEST(Mlp, GradientMatchesFiniteDifferencesFloat) { check_gradient<float>(5e-2); }

TEST(Mlp, FixedWeightsForward) {
  MlpNetwork<double> net(1, 1, 1);
  net.hidden_weights(0, 0) = 2.0;
  net.output_weights(0, 0) = 1.0;
  Eigen::VectorXd x(1);
  x << 0.0;
  // hidden = sigma(0) = 0.5, output = sigma(0.5).
  EXPECT_NEAR(net.forward(x)(0), 1.0 / (1.0 + std::exp(-0.5)), 1e-15);
}

TEST(Mlp, LearnsThresholdConceptAndLossFalls) {
  const Dataset ds = threshold_concept(400, 6);
  MlpConfig cfg;
  cfg.epochs = 60;
  Mlp mlp(cfg);
  mlp.fit(ds);
  ASSERT_EQ(mlp.epoch_losses().size(), 60u);
  EXPECT_LT(mlp.epoch_losses().back(), mlp.epoch_losses().front());
  EXPECT_GT(training_accuracy(mlp, ds), 0.9);
  Mlp again(cfg);
  again.fit(ds);
  EXPECT_EQ(again.epoch_losses(), mlp.epoch_losses()) << "seeded training must be reproducible";
}

TEST(Mlp, RejectsNominalInput) {
  Mlp mlp;
  EXPECT_THROW(mlp.fit(fixtures::mixed_dataset()), DataError);
}

// ---------------------------------------------------------------- linear SVM

TEST(LinearSvm, DualMatchesGridSearch) {
  Eigen::MatrixXd x(2, 4);
  x << 1.0, 2.0, -1.0, 0.5, 1.0, 2.5, -1.0, -1.5;
  Eigen::VectorXd y(4);
  y << 1, 1, -1, -1;
  SvmConfig cfg;
  cfg.c = 1.0;
  cfg.tolerance = 1e-5;
  const auto sol = LinearSmo<double>::solve(x, y, cfg);
  const double smo = LinearSmo<double>::dual_objective(x, y, sol.alpha);

  // Grid over a1..a3 with a4 fixed by sum(y a) = 0.
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd a(4);
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j)
      for (int k = 0; k <= 100; ++k) {
        a << i / 100.0, j / 100.0, k / 100.0, 0.0;
        a(3) = a(0) + a(1) - a(2);
        if (a(3) < 0 || a(3) > 1) continue;
        best = std::max(best, LinearSmo<double>::dual_objective(x, y, a));
      }
  EXPECT_GE(smo, best - 1e-6);
  EXPECT_LE(smo - best, 5e-3);
  EXPECT_NEAR(sol.alpha.dot(y), 0.0, 1e-9);
  EXPECT_TRUE((sol.alpha.array() >= 0).all() && (sol.alpha.array() <= cfg.c).all());
  // w is the weighted sum of support vectors.
  EXPECT_TRUE(sol.w.isApprox(x * (sol.alpha.array() * y.array()).matrix(), 1e-9));
  for (int i = 0; i < 4; ++i) EXPECT_GT(y(i) * (sol.w.dot(x.col(i)) + sol.b), 0.0);
}

TEST(LinearSvm, FloatInstantiation) {
  Eigen::MatrixXf x(1, 4);
  x << -2, -1, 1, 2;
  Eigen::VectorXf y(4);
  y << -1, -1, 1, 1;
  const auto sol = LinearSmo<float>::solve(x, y, SvmConfig{});
  EXPECT_GT(sol.w(0), 0.0f);
}

TEST(LinearSvm, SeparatesThresholdConcept) {
  const Dataset ds = threshold_concept(300, 7);
  LinearSvm svm;
  svm.fit(ds);
  EXPECT_GT(training_accuracy(svm, ds), 0.97);
  const auto s = svm.predict_scores(ds.instances[0]);
  EXPECT_DOUBLE_EQ(s[0], -s[1]);
}

TEST(LinearSvm, RequiresTwoPresentClasses) {
  Dataset ds = threshold_concept(50, 1);
  for (auto& x : ds.instances) x.label = 0;
  LinearSvm svm;
  EXPECT_THROW(svm.fit(ds), DataError);
  ds.schema.class_labels.push_back("third");
  EXPECT_THROW(svm.fit(ds), DataError);
}

// ---------------------------------------------------------------- pipeline

TEST(Pipeline, MlpAndSvmRunOnRawMixedData) {
  const Dataset ds = fixtures::mixed_dataset();
  LearnerParams p;
  for (Algorithm a : {Algorithm::nb, Algorithm::j48, Algorithm::mlp, Algorithm::svm}) {
    auto m = batch_factory(a, p)();
    m->fit(ds);
    EXPECT_EQ(m->predict_scores(ds.instances[0]).size(), 2u) << to_string(a);
  }
}

TEST(Pipeline, HookSeesTrainingRowsOnly) {
  const Dataset ds = fixtures::mixed_dataset();
  std::size_t seen = 0;
  PipelineSteps steps{true, true, [&](const Dataset& d) { seen = d.size(); }};
  PreprocessedModel m(steps, std::make_unique<Mlp>());
  const std::vector<std::size_t> rows{0, 1, 4, 5};
  m.fit(ds.subset(rows));
  EXPECT_EQ(seen, 4u);
  EXPECT_EQ(m.predict_scores(ds.instances[2]).size(), 2u); // udp unseen in training
}

TEST(Learners, NamesRoundTrip) {
  for (const char* name : {"nb", "j48", "knn", "mlp", "svm", "snb", "ht", "wknn", "ozaboost"}) {
    const auto a = parse_algorithm(name);
    ASSERT_TRUE(a) << name;
    EXPECT_EQ(to_string(*a), name);
  }
  EXPECT_FALSE(parse_algorithm("rf"));
  EXPECT_THROW(batch_factory(Algorithm::ht, {}), std::invalid_argument);
}
