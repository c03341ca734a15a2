#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "creativity/io.hpp"
#include "creativity/model.hpp"
#include "creativity/synthetic.hpp"
#include "test_support.hpp"

using namespace creativity;
using test_support::TempDir;

namespace {

const char* kManifest3 = "id,year,artist,style\na1,1500,X,Renaissance\na2,1600,Y,Baroque\na3,1700,Z,Rococo\n";
const char* kFeatures3x4 = "0,0,0,0\n1,0,0,0\n0,2,0,0\n";

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Ingest, ThreeRowManifestAndCsvFeatures) {
    TempDir dir("model");
    auto m = dir.write("m.csv", kManifest3);
    auto f = dir.write("f.csv", kFeatures3x4);
    const auto corpus = ingest_corpus(m, {{"subject", f}});
    ASSERT_EQ(corpus.size(), 3u);
    ASSERT_EQ(corpus.aspects().size(), 1u);
    EXPECT_EQ(corpus.aspect("subject").dim(), 4u);
    EXPECT_EQ(corpus.artifact(1).id, "a2");
    EXPECT_EQ(corpus.artifact(1).year, 1600);
    EXPECT_EQ(corpus.artifact(2).style, "Rococo");
    EXPECT_DOUBLE_EQ(corpus.aspect("subject").row(2)[1], 2.0);
}

TEST(Ingest, DuplicateIdNamesIdAndBothRows) {
    TempDir dir("model");
    auto m = dir.write("m.csv", "id,year\na1,1500\na2,1510\na1,1520\n");
    auto f = dir.write("f.csv", "1\n2\n3\n");
    const auto msg = message_of([&] { ingest_corpus(m, {{"x", f}}); });
    EXPECT_NE(msg.find("'a1'"), std::string::npos) << msg;
    EXPECT_NE(msg.find("rows 1 and 3"), std::string::npos) << msg;
    EXPECT_THROW(ingest_corpus(m, {{"x", f}}), ValidationError);
}

TEST(Ingest, RowCountMismatch) {
    TempDir dir("model");
    auto m = dir.write("m.csv", kManifest3);
    auto f = dir.write("f.csv", "1,2\n3,4\n");
    const auto msg = message_of([&] { ingest_corpus(m, {{"x", f}}); });
    EXPECT_NE(msg.find("row-count mismatch"), std::string::npos) << msg;
}

TEST(Ingest, MissingOrNonIntegerYearRejected) {
    TempDir dir("model");
    auto f = dir.write("f.csv", "1\n2\n");
    auto missing = dir.write("m1.csv", "id,year\na,1500\nb,\n");
    auto fractional = dir.write("m2.csv", "id,year\na,1500\nb,1600.5\n");
    EXPECT_NE(message_of([&] { ingest_corpus(missing, {{"x", f}}); }).find("missing year"), std::string::npos);
    EXPECT_NE(message_of([&] { ingest_corpus(fractional, {{"x", f}}); }).find("row 2"), std::string::npos);
}

TEST(Ingest, NonFiniteFeatureReportsRow) {
    TempDir dir("model");
    auto m = dir.write("m.csv", kManifest3);
    auto f = dir.write("f.csv", "1,2\n3,nan\n5,6\n");
    const auto msg = message_of([&] { ingest_corpus(m, {{"x", f}}); });
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
}

TEST(Ingest, MissingFileIsIoError) {
    TempDir dir("model");
    auto m = dir.write("m.csv", kManifest3);
    EXPECT_THROW(ingest_corpus(m, {{"x", dir / "nope.csv"}}), IoError);
}

TEST(Ingest, QuotedManifestFields) {
    TempDir dir("model");
    auto m = dir.write("m.csv", "id,year,artist\r\n\"a,1\",1500,\"Le \"\"Maître\"\"\"\r\nb,1501,Z\r\n");
    auto f = dir.write("f.csv", "1\n2\n");
    const auto corpus = ingest_corpus(m, {{"x", f}});
    EXPECT_EQ(corpus.artifact(0).id, "a,1");
    EXPECT_EQ(corpus.artifact(0).artist, "Le \"Maître\"");
}

TEST(FeatureBinary, DecodesHeaderAndRowMajorFloats) {
    const auto fs = FeatureSet("x", 3, {1.5, -2.0, 0.25, 4.0, 5.0, 6.0});
    const auto bytes = encode_feature_binary(fs);
    ASSERT_EQ(bytes.size(), 16u + 6 * 4);
    EXPECT_EQ(bytes.substr(0, 4), "CRFT");
    EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 2);  // rows, little endian
    EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 3);  // dim
    const auto back = parse_feature_binary(bytes, "x", "mem");
    EXPECT_EQ(back.values(), fs.values());
}

TEST(FeatureBinary, RejectsTruncationAndReservedBytes) {
    const auto bytes = encode_feature_binary(FeatureSet("x", 2, {1, 2, 3, 4}));
    EXPECT_THROW(parse_feature_binary(bytes.substr(0, bytes.size() - 1), "x", "mem"), ValidationError);
    auto bad = bytes;
    bad[13] = 1;
    EXPECT_THROW(parse_feature_binary(bad, "x", "mem"), ValidationError);
}

TEST(FeatureBinary, IngestDetectsFormatByMagic) {
    TempDir dir("model");
    auto m = dir.write("m.csv", kManifest3);
    auto f = dir.write("f.crft", encode_feature_binary(FeatureSet("x", 4, {0, 0, 0, 0, 1, 0, 0, 0, 0, 2, 0, 0})));
    const auto corpus = ingest_corpus(m, {{"layout", f}});
    EXPECT_EQ(corpus.aspect("layout").dim(), 4u);
    EXPECT_DOUBLE_EQ(corpus.aspect("layout").row(2)[1], 2.0);
}

TEST(EstimateSigma, SinglePairIsItsDistance) {
    const FeatureSet fs("x", 2, {0.0, 0.0, 0.0, 2.0});
    EXPECT_DOUBLE_EQ(estimate_sigma(fs, 7), 2.0);
}

TEST(EstimateSigma, IdenticalVectorsAreDegenerate) {
    const FeatureSet fs("x", 2, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
    try {
        estimate_sigma(fs, 1);
        FAIL() << "expected an error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("degenerate feature set"), std::string::npos);
    }
}

TEST(EstimateSigma, NeedsTwoArtifacts) {
    EXPECT_THROW(estimate_sigma(FeatureSet("x", 2, {1.0, 2.0}), 1), ValidationError);
}

TEST(EstimateSigma, DeterministicForFixedSeed) {
    const auto corpus = synthetic::random_corpus(100, 5, 11);
    const auto& fs = corpus.aspects().front();
    EXPECT_EQ(estimate_sigma(fs, 3), estimate_sigma(fs, 3));
    // 160 artifacts give 12720 pairs, above the 10,000 sample cap.
    const auto big = synthetic::random_corpus(160, 5, 12);
    EXPECT_EQ(estimate_sigma(big.aspects().front(), 3), estimate_sigma(big.aspects().front(), 3));
}

TEST(EstimateSigma, PermutationInsensitiveWhenAllPairsCovered) {
    const auto corpus = synthetic::random_corpus(40, 3, 5);
    const auto& fs = corpus.aspects().front();
    std::vector<std::size_t> perm(fs.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(9);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> shuffled;
    for (auto p : perm)
        for (double v : fs.row(p)) shuffled.push_back(v);
    EXPECT_DOUBLE_EQ(estimate_sigma(fs, 1), estimate_sigma(FeatureSet("x", 3, shuffled), 99));
}

TEST(Corpus, OrderPreservingAcrossAspects) {
    TempDir dir("model");
    auto m = dir.write("m.csv", kManifest3);
    auto f1 = dir.write("f1.csv", "1\n2\n3\n");
    auto f2 = dir.write("f2.csv", "10,11\n20,21\n30,31\n");
    const auto corpus = ingest_corpus(m, {{"a", f1}, {"b", f2}});
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(corpus.aspect("a").row(i)[0], double(i + 1));
        EXPECT_DOUBLE_EQ(corpus.aspect("b").row(i)[0], double(10 * (i + 1)));
    }
}

TEST(RunConfig, ParsesKeyValueFileWithComments) {
    const auto cfg = parse_run_config(
        "# scoring\nK = 20\nalpha=0.5\nsigma = auto\nsigma.gist = 1.5\nbalancing_mode = local\n"
        "solver = closed_form\nscoring = split\nbeta = 0.9  # originality\nseed = 42\n");
    EXPECT_EQ(cfg.K, 20u);
    EXPECT_DOUBLE_EQ(cfg.alpha, 0.5);
    EXPECT_FALSE(cfg.sigma.has_value());
    EXPECT_DOUBLE_EQ(*cfg.sigma_for("gist"), 1.5);
    EXPECT_FALSE(cfg.sigma_for("classeme").has_value());
    EXPECT_EQ(cfg.balancing_mode, BalancingMode::local);
    EXPECT_EQ(cfg.solver, SolverKind::closed_form);
    EXPECT_EQ(cfg.scoring, ScoringMode::split);
    EXPECT_DOUBLE_EQ(cfg.beta, 0.9);
    EXPECT_EQ(cfg.seed, 42u);
}

TEST(RunConfig, DefaultsMatchReferenceSettings) {
    const RunConfig cfg;
    EXPECT_EQ(cfg.K, 500u);
    EXPECT_DOUBLE_EQ(cfg.alpha, 0.15);
    EXPECT_DOUBLE_EQ(cfg.tol, 1e-10);
    EXPECT_EQ(cfg.max_iters, 1000u);
    EXPECT_EQ(cfg.temporal_prior, TemporalPrior::none);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(RunConfig, RejectsOutOfRangeValues) {
    EXPECT_THROW(parse_run_config("alpha = 1.5"), ConfigError);
    EXPECT_THROW(parse_run_config("beta = -0.1"), ConfigError);
    EXPECT_THROW(parse_run_config("percentile_p = 100"), ConfigError);
    EXPECT_THROW(parse_run_config("percentile_p = 0"), ConfigError);
    EXPECT_THROW(parse_run_config("K = 0"), ConfigError);
    EXPECT_THROW(parse_run_config("sigma = -1"), ConfigError);
    EXPECT_THROW(parse_run_config("tol = 0"), ConfigError);
    EXPECT_THROW(parse_run_config("solver = magic"), ConfigError);
    EXPECT_THROW(parse_run_config("bogus = 1"), ConfigError);
    EXPECT_THROW(parse_run_config("K 5"), ConfigError);
    EXPECT_THROW(parse_run_config("K = 5x"), ConfigError);
}
