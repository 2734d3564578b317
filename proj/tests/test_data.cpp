#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unistd.h>

#include "grbfnn/data.hpp"
#include "grbfnn/io.hpp"

using namespace grbfnn;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("grbfnn_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

double p3_formula(const Ref<Vector>& x) {
  return 10.0 * std::sin(M_PI * x(0) * x(1)) + 20.0 * (x(2) - 0.5) * (x(2) - 0.5) +
         10.0 * x(3) + 5.0 * x(4);
}

}  // namespace

TEST_CASE("gen_p1 honors the shell condition and noise moments") {
  const Dataset ds = gen_p1(1000, 3);
  REQUIRE(ds.n() == 1000);
  REQUIRE(ds.dim() == 10);
  CHECK(ds.task == TaskKind::binary);

  Index positives = 0;
  for (Index i = 0; i < ds.n(); ++i) {
    if (ds.y(i) == 1.0) {
      ++positives;
      const double r2 = ds.X.row(i).head(4).squaredNorm();
      CHECK(r2 >= 9.0);
      CHECK(r2 <= 16.0);
    }
  }
  CHECK(positives == 500);

  for (Index j = 4; j < 10; ++j) {
    const double mean = ds.X.col(j).mean();
    const double var = (ds.X.col(j).array() - mean).square().mean();
    CHECK(std::abs(mean) < 0.2);
    CHECK(std::abs(var - 1.0) < 0.3);
  }

  REQUIRE(ds.relevant_mask.size() == 10);
  for (Index j = 0; j < 10; ++j) CHECK(ds.relevant_mask[j] == (j < 4));

  const Dataset again = gen_p1(1000, 3);
  CHECK(again.X == ds.X);
  CHECK(again.y == ds.y);
  CHECK(gen_p1(1000, 4).X != ds.X);
}

TEST_CASE("gen_p2 grouping and statistics") {
  // the 8 corners of {-1,1}^3 grouped by (v1 v3, v2 v3) form 4 antipodal pairs
  std::map<std::pair<int, int>, std::vector<std::array<int, 3>>> groups;
  for (int v1 : {-1, 1})
    for (int v2 : {-1, 1})
      for (int v3 : {-1, 1})
        groups[{v1 * v3, v2 * v3}].push_back({v1, v2, v3});
  REQUIRE(groups.size() == 4);
  for (const auto& [key, corners] : groups) {
    REQUIRE(corners.size() == 2);
    for (int j = 0; j < 3; ++j) CHECK(corners[0][j] == -corners[1][j]);
  }

  const Dataset ds = gen_p2(1000, 11);
  REQUIRE(ds.n() == 1000);
  CHECK(ds.task == TaskKind::multiclass);
  CHECK(ds.n_classes == 4);

  // class-conditional means of the relevant features vanish (mixture of +-v)
  for (int cls = 0; cls < 4; ++cls) {
    Vector sum = Vector::Zero(3);
    Index count = 0;
    for (Index i = 0; i < ds.n(); ++i) {
      if (ds.y(i) == cls) {
        sum += ds.X.row(i).head(3).transpose();
        ++count;
      }
    }
    CHECK(count == 250);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(sum(j) / double(count)) < 0.25);
  }

  // noise features carry no class signal: point-biserial r per class
  for (Index j = 3; j < 10; ++j) {
    const double fm = ds.X.col(j).mean();
    const double fs = std::sqrt((ds.X.col(j).array() - fm).square().mean());
    for (int cls = 0; cls < 4; ++cls) {
      double m1 = 0, m0 = 0;
      Index n1 = 0, n0 = 0;
      for (Index i = 0; i < ds.n(); ++i) {
        if (ds.y(i) == cls) {
          m1 += ds.X(i, j);
          ++n1;
        } else {
          m0 += ds.X(i, j);
          ++n0;
        }
      }
      m1 /= double(n1);
      m0 /= double(n0);
      const double p = double(n1) / double(ds.n());
      const double r = (m1 - m0) / fs * std::sqrt(p * (1.0 - p));
      CHECK(std::abs(r) < 0.15);
    }
  }
}

TEST_CASE("gen_p3 implements the stated formula") {
  // direct formula evaluation at the midpoint
  Vector mid = Vector::Constant(10, 0.5);
  CHECK(p3_formula(mid) == doctest::Approx(14.571067811865475).epsilon(1e-15));
  // all terms vanish
  Vector zero_case = Vector::Zero(10);
  zero_case(2) = 0.5;  // x3 = 0.5 kills the quadratic term
  CHECK(p3_formula(zero_case) == 0.0);

  const Dataset ds = gen_p3(500, 9, 0.0);
  CHECK(ds.task == TaskKind::regression);
  for (Index i = 0; i < ds.n(); ++i) {
    CHECK(ds.y(i) == doctest::Approx(p3_formula(ds.X.row(i).transpose()))
                         .epsilon(1e-14));
    CHECK(ds.X.row(i).minCoeff() >= 0.0);
    CHECK(ds.X.row(i).maxCoeff() <= 1.0);
  }

  // permuting irrelevant features leaves the noise-free target unchanged
  for (Index i = 0; i < ds.n(); ++i) {
    Vector x = ds.X.row(i).transpose();
    std::swap(x(5), x(9));
    std::swap(x(6), x(8));
    CHECK(p3_formula(x) == ds.y(i));
  }

  // noisy version differs from the clean formula
  const Dataset noisy = gen_p3(500, 9, 1.0);
  Index differing = 0;
  for (Index i = 0; i < noisy.n(); ++i)
    if (noisy.y(i) != p3_formula(noisy.X.row(i).transpose())) ++differing;
  CHECK(differing > 450);
}

TEST_CASE("gen_toys") {
  SUBCASE("two_gaussians class means") {
    const Dataset ds = gen_toys(ToyKind::two_gaussians, 100, {}, 5);
    REQUIRE(ds.n() == 100);
    Vector mean0 = Vector::Zero(2), mean1 = Vector::Zero(2);
    Index n0 = 0, n1 = 0;
    for (Index i = 0; i < 100; ++i) {
      if (ds.y(i) == 0.0) {
        mean0 += ds.X.row(i).transpose();
        ++n0;
      } else {
        mean1 += ds.X.row(i).transpose();
        ++n1;
      }
    }
    mean0 /= double(n0);
    mean1 /= double(n1);
    CHECK(n0 == 50);
    CHECK(n1 == 50);
    CHECK((mean0 - Vector::Constant(2, 1.0)).norm() < 0.3);
    CHECK((mean1 - Vector::Constant(2, 2.8)).norm() < 0.3);
  }

  SUBCASE("sine_ridge symmetry for a == b") {
    ToyParams p;
    p.a = 0.5;
    p.b = 0.5;
    const Dataset ds = gen_toys(ToyKind::sine_ridge, 200, p, 7);
    for (Index i = 0; i < ds.n(); ++i) {
      const double swapped = std::sin(p.a * ds.X(i, 1) + p.b * ds.X(i, 0));
      CHECK(ds.y(i) == doctest::Approx(swapped).epsilon(1e-14));
    }
  }

  SUBCASE("moons balance") {
    const Dataset ds = gen_toys(ToyKind::moons, 101, {}, 3);
    Index n0 = 0;
    for (Index i = 0; i < ds.n(); ++i)
      if (ds.y(i) == 0.0) ++n0;
    CHECK(n0 == 51);
    CHECK(ds.n() - n0 == 50);
  }

  SUBCASE("unknown kind string") {
    CHECK_THROWS_AS(toy_from_string("circles"), std::invalid_argument);
  }
}

TEST_CASE("csv round trip and error diagnostics") {
  TempDir tmp;

  SUBCASE("round trip preserves doubles exactly") {
    Dataset ds = gen_p3(20, 1, 1.0);
    const std::string path = tmp.file("p3.csv");
    save_csv(ds, path);
    const Dataset back = load_csv(path, "y", TaskKind::regression);
    CHECK(back.X == ds.X);
    CHECK(back.y == ds.y);
    CHECK(back.feature_names == ds.feature_names);
  }

  SUBCASE("basic parse") {
    const std::string path = tmp.file("two.csv");
    write_file_atomic(path, "a,b,y\n1,2,3\n4,5,6\n");
    const Dataset ds = load_csv(path, "y", TaskKind::regression);
    CHECK(ds.n() == 2);
    CHECK(ds.dim() == 2);
    CHECK(ds.X(1, 0) == 4.0);
    CHECK(ds.y(1) == 6.0);
  }

  SUBCASE("NaN cell names the line and column") {
    const std::string path = tmp.file("nan.csv");
    write_file_atomic(path, "a,b,y\n1,NaN,3\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "y", TaskKind::regression),
                         doctest::Contains("line 2, column 'b'"),
                         std::runtime_error);
  }

  SUBCASE("non-numeric cell") {
    const std::string path = tmp.file("bad.csv");
    write_file_atomic(path, "a,y\nfoo,3\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "y", TaskKind::regression),
                         doctest::Contains("not numeric"), std::runtime_error);
  }

  SUBCASE("ragged row") {
    const std::string path = tmp.file("ragged.csv");
    write_file_atomic(path, "a,b,y\n1,2,3\n1,2\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "y", TaskKind::regression),
                         doctest::Contains("line 3"), std::runtime_error);
  }

  SUBCASE("missing target column") {
    const std::string path = tmp.file("notarget.csv");
    write_file_atomic(path, "a,b\n1,2\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "y", TaskKind::regression),
                         doctest::Contains("'y' not found"), std::runtime_error);
  }

  SUBCASE("empty file") {
    const std::string path = tmp.file("empty.csv");
    write_file_atomic(path, "");
    CHECK_THROWS_WITH_AS(load_csv(path, "y", TaskKind::regression),
                         doctest::Contains("empty"), std::runtime_error);
  }

  SUBCASE("headerless file is rejected at line 1") {
    const std::string path = tmp.file("headerless.csv");
    write_file_atomic(path, "1,2,3\n4,5,6\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "y", TaskKind::regression),
                         doctest::Contains("line 1"), std::runtime_error);
  }

  SUBCASE("classification label validation") {
    const std::string path = tmp.file("labels.csv");
    write_file_atomic(path, "a,y\n1,0\n2,1\n3,2\n");
    const Dataset ds = load_csv(path, "y", TaskKind::multiclass);
    CHECK(ds.n_classes == 3);
    CHECK_THROWS_AS(load_csv(path, "y", TaskKind::binary), std::runtime_error);
    write_file_atomic(path, "a,y\n1,0.5\n");
    CHECK_THROWS_AS(load_csv(path, "y", TaskKind::multiclass), std::runtime_error);
  }
}

TEST_CASE("kfold_split") {
  SUBCASE("folds partition the indices") {
    const auto splits = kfold_split(23, 5, 3);
    REQUIRE(splits.size() == 5);
    std::set<Index> seen;
    for (const auto& s : splits) {
      for (Index i : s.test) {
        CHECK(seen.count(i) == 0);
        seen.insert(i);
      }
      CHECK(s.train.size() + s.test.size() == 23);
    }
    CHECK(seen.size() == 23);
  }

  SUBCASE("n=10, 5 folds gives test folds of size 2") {
    for (const auto& s : kfold_split(10, 5, 1)) CHECK(s.test.size() == 2);
  }

  SUBCASE("stratified 60/40 split is exact") {
    Vector labels(100);
    for (Index i = 0; i < 100; ++i) labels(i) = i < 60 ? 0.0 : 1.0;
    const auto splits = kfold_split(100, 5, 9, &labels);
    for (const auto& s : splits) {
      Index zeros = 0, ones = 0;
      for (Index i : s.test) (labels(i) == 0.0 ? zeros : ones)++;
      CHECK(zeros == 12);
      CHECK(ones == 8);
    }
  }

  SUBCASE("class smaller than fold count throws") {
    Vector labels(10);
    labels.setZero();
    labels(9) = 1.0;
    CHECK_THROWS_AS(kfold_split(10, 5, 0, &labels), std::invalid_argument);
  }

  SUBCASE("deterministic per seed") {
    const auto a = kfold_split(50, 5, 4);
    const auto b = kfold_split(50, 5, 4);
    for (int f = 0; f < 5; ++f) CHECK(a[f].test == b[f].test);
    const auto c = kfold_split(50, 5, 5);
    bool any_diff = false;
    for (int f = 0; f < 5; ++f)
      if (a[f].test != c[f].test) any_diff = true;
    CHECK(any_diff);
  }
}

TEST_CASE("metrics") {
  Vector a(4), b(4);
  a << 1, 2, 3, 4;
  CHECK(metrics(TaskKind::regression, a, a) == 0.0);
  CHECK(metrics(TaskKind::binary, a, a) == 1.0);

  Vector t(2), p(2);
  t << 0, 0;
  p << 1, 1;
  CHECK(metric_rmse(t, p) == doctest::Approx(1.0));

  b << 1, 2, 3, 0;
  CHECK(metric_accuracy(a, b) == doctest::Approx(0.75));

  CHECK_THROWS_AS(metric_rmse(a, t), std::invalid_argument);
  CHECK_THROWS_AS(metric_accuracy(Vector(), Vector()), std::invalid_argument);
}

TEST_CASE("grid_search") {
  const Dataset ds = gen_toys(ToyKind::two_gaussians, 40, {}, 2);
  SearchGrid grid;
  grid.lambda_w = {0.0, 0.01};
  grid.lambda_u = {0.001, 0.1};
  grid.n_centers = {2};
  grid.learning_rate = {0.01};
  grid.base.max_epochs = 40;
  CvPlan plan;
  plan.n_folds = 2;
  plan.seeds = {0};

  const auto result = grid_search(ds, grid, plan, 1);

  SUBCASE("row and config counts") {
    CHECK(result.configs.size() == 4);  // product of grid sizes
    CHECK(result.records.size() == 4 * 2 * 1);
    CHECK(result.summaries.size() == 4);
  }

  SUBCASE("single-config grid reduces to plain CV") {
    SearchGrid single;
    single.n_centers = {2};
    single.learning_rate = {0.01};
    single.base.max_epochs = 40;
    const auto r = grid_search(ds, single, plan, 1);
    CHECK(r.records.size() == 2);
    CHECK(r.best == 0);
  }

  SUBCASE("best flag matches a re-scan of the summaries") {
    Index best = 0;
    for (Index c = 1; c < static_cast<Index>(result.summaries.size()); ++c)
      if (result.summaries[c].mean_test > result.summaries[best].mean_test)
        best = c;
    CHECK(result.best == best);
  }

  SUBCASE("heatmap has the grid dimensions and holds the best cells") {
    const Matrix H = result.heatmap(grid);
    REQUIRE(H.rows() == 2);
    REQUIRE(H.cols() == 2);
    for (const auto& s : result.summaries)
      CHECK(H(s.config.iw, s.config.iu) >= s.mean_test);
  }

  SUBCASE("records CSV shape") {
    std::istringstream in(result.records_csv());
    std::string line;
    std::getline(in, line);
    CHECK(line ==
          "lambda_w,lambda_u,lambda_c,M,lr,mode,seed,fold,train_metric,test_metric");
    int rows = 0;
    while (std::getline(in, line))
      if (!line.empty()) ++rows;
    CHECK(rows == 8);
  }

  SUBCASE("thread count does not change the records") {
    const auto threaded = grid_search(ds, grid, plan, 4);
    REQUIRE(threaded.records.size() == result.records.size());
    for (std::size_t i = 0; i < result.records.size(); ++i) {
      CHECK(threaded.records[i].train_metric == result.records[i].train_metric);
      CHECK(threaded.records[i].test_metric == result.records[i].test_metric);
    }
  }

  SUBCASE("training failures carry the config identification") {
    SearchGrid bad = grid;
    bad.n_centers = {64};  // more centers than fold-train rows
    CHECK_THROWS_WITH_AS(grid_search(ds, bad, plan, 1),
                         doctest::Contains("config"), std::runtime_error);
  }
}

TEST_CASE("dataset subset keeps metadata") {
  const Dataset ds = gen_p1(50, 1);
  const Dataset sub = ds.subset({0, 5, 30});
  CHECK(sub.n() == 3);
  CHECK(sub.task == TaskKind::binary);
  CHECK(sub.n_classes == 2);
  CHECK(sub.relevant_mask == ds.relevant_mask);
  CHECK(sub.X.row(1) == ds.X.row(5));
  CHECK(sub.y(2) == ds.y(30));
}
