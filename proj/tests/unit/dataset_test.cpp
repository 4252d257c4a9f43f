#include "fairaudit/dataset.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fairaudit/rng.hpp"

using namespace fairaudit;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        dir_ = fs::temp_directory_path() /
               ("fairaudit_ds_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                "_" + std::to_string(counter_++));
        fs::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    std::string file(const std::string& name, const std::string& content) const {
        fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p.string();
    }
    fs::path path() const { return dir_; }

private:
    static inline int counter_ = 0;
    fs::path dir_;
};

ColumnMapping basic_mapping() {
    return ColumnMapping::from_json(R"({
        "id": "id", "outcome": "outcome", "score": "score",
        "attributes": {"sex": "categorical", "age": "numeric"}
    })");
}

constexpr const char* kBasicCsv =
    "id,outcome,score,sex,age\n"
    "a,0,0.1,F,40\n"
    "b,1,0.5,M,60\n"
    "c,1,0.9,F,55\n";

}  // namespace

TEST(LoadDataset, ThreeRowEcho) {
    TempDir tmp;
    AuditDataset ds = load_dataset(tmp.file("d.csv", kBasicCsv), basic_mapping());
    ASSERT_EQ(ds.size(), 3u);
    EXPECT_EQ(ds.records[0].id, "a");
    EXPECT_EQ(ds.records[0].outcome, 0);
    EXPECT_DOUBLE_EQ(ds.records[0].score, 0.1);
    EXPECT_DOUBLE_EQ(ds.records[1].score, 0.5);
    EXPECT_DOUBLE_EQ(ds.records[2].score, 0.9);
    const std::size_t sex = ds.attribute_index("sex");
    const std::size_t age = ds.attribute_index("age");
    EXPECT_EQ(std::get<std::string>(ds.records[1].attributes[sex]), "M");
    EXPECT_DOUBLE_EQ(std::get<double>(ds.records[2].attributes[age]), 55.0);
    ASSERT_EQ(ds.attribute_schema.size(), 2u);
    EXPECT_EQ(ds.attribute_schema[sex].levels, (std::vector<std::string>{"F", "M"}));
    EXPECT_EQ(ds.embedding_length, 0u);
}

TEST(LoadDataset, ScoreOutOfRangeReportsRow) {
    TempDir tmp;
    std::string csv = "id,outcome,score,sex,age\n";
    for (int i = 0; i < 7; ++i) {
        csv += "r" + std::to_string(i) + ",0,0.5,F,30\n";
    }
    csv += "r7,1,1.2,M,40\n";
    try {
        load_dataset(tmp.file("d.csv", csv), basic_mapping());
        FAIL() << "expected ScoreOutOfRange";
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ScoreOutOfRange);
        ASSERT_TRUE(e.row().has_value());
        EXPECT_EQ(*e.row(), 7u);
    }
}

TEST(LoadDataset, NonBinaryOutcome) {
    TempDir tmp;
    std::string csv = "id,outcome,score,sex,age\na,2,0.5,F,30\n";
    EXPECT_THROW(
        {
            try {
                load_dataset(tmp.file("d.csv", csv), basic_mapping());
            } catch (const AuditError& e) {
                EXPECT_EQ(e.code(), ErrorCode::NonBinaryOutcome);
                throw;
            }
        },
        AuditError);
}

TEST(LoadDataset, DuplicateId) {
    TempDir tmp;
    std::string csv = "id,outcome,score,sex,age\na,0,0.5,F,30\na,1,0.6,M,40\n";
    try {
        load_dataset(tmp.file("d.csv", csv), basic_mapping());
        FAIL();
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateId);
        EXPECT_EQ(*e.row(), 1u);
    }
}

TEST(LoadDataset, FewerThanTwoRecordsRejected) {
    TempDir tmp;
    std::string csv = "id,outcome,score,sex,age\na,0,0.5,F,30\n";
    EXPECT_THROW(load_dataset(tmp.file("d.csv", csv), basic_mapping()), AuditError);
}

TEST(LoadDataset, MissingColumn) {
    TempDir tmp;
    std::string csv = "id,outcome,sex,age\na,0,F,30\n";
    try {
        load_dataset(tmp.file("d.csv", csv), basic_mapping());
        FAIL();
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingColumn);
    }
}

TEST(LoadDataset, MissingAttributeValueRejected) {
    TempDir tmp;
    std::string csv = "id,outcome,score,sex,age\na,0,0.5,,30\n";
    try {
        load_dataset(tmp.file("d.csv", csv), basic_mapping());
        FAIL();
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingValue);
    }
}

TEST(LoadDataset, RaggedEmbedding) {
    TempDir tmp;
    ColumnMapping mapping = ColumnMapping::from_json(R"({
        "id": "id", "outcome": "outcome", "score": "score",
        "attributes": {}, "embedding_prefix": "emb"
    })");
    std::string csv = "id,outcome,score,emb_0,emb_1\na,0,0.5,0.1,0.2\nb,1,0.6,0.3,\n";
    try {
        load_dataset(tmp.file("d.csv", csv), mapping);
        FAIL();
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), ErrorCode::RaggedEmbedding);
        EXPECT_EQ(*e.row(), 1u);
    }
}

TEST(LoadDataset, EmbeddingsLoadContiguously) {
    TempDir tmp;
    ColumnMapping mapping = ColumnMapping::from_json(R"({
        "id": "id", "outcome": "outcome", "score": "score",
        "attributes": {}, "embedding_prefix": "emb"
    })");
    std::string csv = "id,outcome,score,emb_0,emb_1,emb_2\na,0,0.5,1,2,3\nb,1,0.6,4,5,6\n";
    AuditDataset ds = load_dataset(tmp.file("d.csv", csv), mapping);
    EXPECT_EQ(ds.embedding_length, 3u);
    EXPECT_EQ(ds.records[1].embedding, (std::vector<double>{4, 5, 6}));
}

TEST(SaveDataset, RoundTripsAllFields) {
    TempDir tmp;
    AuditDataset ds = load_dataset(tmp.file("d.csv", kBasicCsv), basic_mapping());
    ColumnMapping mapping = save_dataset(ds, (tmp.path() / "again.csv").string());
    AuditDataset back = load_dataset((tmp.path() / "again.csv").string(), mapping);
    ASSERT_EQ(back.size(), ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        EXPECT_EQ(back.records[i].id, ds.records[i].id);
        EXPECT_EQ(back.records[i].outcome, ds.records[i].outcome);
        EXPECT_EQ(back.records[i].score, ds.records[i].score);  // exact
        EXPECT_EQ(back.records[i].attributes, ds.records[i].attributes);
        EXPECT_EQ(back.records[i].embedding, ds.records[i].embedding);
    }
}

// ---------------------------------------------------------------------------
// Filters and stratify
// ---------------------------------------------------------------------------

namespace {

AuditDataset synthetic_census(std::size_t n, std::uint64_t seed) {
    AuditDataset ds;
    ds.attribute_schema = {{"sex", AttributeType::Categorical, {"F", "M"}},
                           {"age", AttributeType::Numeric, {}}};
    RandomStream stream(seed);
    for (std::size_t i = 0; i < n; ++i) {
        AuditRecord r;
        r.id = "p" + std::to_string(i);
        r.outcome = stream.next_bernoulli(0.4) ? 1 : 0;
        r.score = stream.next_unit();
        r.attributes.emplace_back(std::string(stream.next_bernoulli(0.5) ? "F" : "M"));
        r.attributes.emplace_back(20.0 + 60.0 * stream.next_unit());
        ds.records.push_back(std::move(r));
    }
    return ds;
}

}  // namespace

TEST(Stratify, EmptyFilterKeepsEverything) {
    AuditDataset ds = synthetic_census(10, 1);
    AuditDataset out = stratify(ds, SubgroupFilter{});
    EXPECT_EQ(out.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(out.records[i].id, ds.records[i].id);
}

TEST(Stratify, EqualsCount) {
    AuditDataset ds;
    ds.attribute_schema = {{"sex", AttributeType::Categorical, {"F", "M"}}};
    for (int i = 0; i < 10; ++i) {
        AuditRecord r;
        r.id = std::to_string(i);
        r.outcome = i % 2;
        r.score = 0.5;
        r.attributes.emplace_back(std::string(i < 4 ? "F" : "M"));
        ds.records.push_back(std::move(r));
    }
    EXPECT_EQ(stratify(ds, SubgroupFilter::parse("sex=F")).size(), 4u);
    EXPECT_EQ(stratify(ds, SubgroupFilter::parse("sex=M")).size(), 6u);
}

TEST(Stratify, ConjunctionMatchesLinearScanOracle) {
    AuditDataset ds = synthetic_census(500, 99);
    SubgroupFilter filter = SubgroupFilter::parse("sex=F & age>=50");

    std::size_t expected = 0;
    for (const auto& r : ds.records) {
        bool is_f = std::get<std::string>(r.attributes[0]) == "F";
        bool old_enough = std::get<double>(r.attributes[1]) >= 50.0;
        if (is_f && old_enough) ++expected;
    }
    AuditDataset out = stratify(ds, filter);
    EXPECT_EQ(out.size(), expected);
    for (const auto& r : out.records) {
        EXPECT_EQ(std::get<std::string>(r.attributes[0]), "F");
        EXPECT_GE(std::get<double>(r.attributes[1]), 50.0);
    }
}

TEST(Stratify, Idempotent) {
    AuditDataset ds = synthetic_census(200, 5);
    SubgroupFilter filter = SubgroupFilter::parse("sex=M & age<45");
    AuditDataset once = stratify(ds, filter);
    AuditDataset twice = stratify(once, filter);
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
        EXPECT_EQ(once.records[i].id, twice.records[i].id);
    }
}

TEST(Stratify, LevelsPartitionTheDataset) {
    AuditDataset ds = synthetic_census(300, 12);
    AuditDataset f = stratify(ds, SubgroupFilter::parse("sex=F"));
    AuditDataset m = stratify(ds, SubgroupFilter::parse("sex=M"));
    EXPECT_EQ(f.size() + m.size(), ds.size());
    std::set<std::string> ids;
    for (const auto& r : f.records) ids.insert(r.id);
    for (const auto& r : m.records) ids.insert(r.id);
    EXPECT_EQ(ids.size(), ds.size());
}

TEST(Stratify, UnknownAttributeThrows) {
    AuditDataset ds = synthetic_census(5, 3);
    try {
        stratify(ds, SubgroupFilter::parse("race=1"));
        FAIL();
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownAttribute);
    }
}

TEST(Stratify, EmptyResultAllowed) {
    AuditDataset ds = synthetic_census(20, 8);
    AuditDataset out = stratify(ds, SubgroupFilter::parse("age>=1000"));
    EXPECT_EQ(out.size(), 0u);
}

TEST(SubgroupFilter, ParseRoundTrip) {
    SubgroupFilter filter = SubgroupFilter::parse("sex=F & age>=50 & fst=1|2");
    ASSERT_EQ(filter.conjuncts.size(), 3u);
    EXPECT_EQ(filter.to_string(), "sex=F & age>=50 & fst=1|2");
    EXPECT_TRUE(std::holds_alternative<EqualsPredicate>(filter.conjuncts[0].predicate));
    EXPECT_TRUE(std::holds_alternative<RangePredicate>(filter.conjuncts[1].predicate));
    EXPECT_TRUE(std::holds_alternative<InSetPredicate>(filter.conjuncts[2].predicate));
}

TEST(SubgroupFilter, RangeEndpoints) {
    EXPECT_TRUE(predicate_matches(SubgroupFilter::parse("a>=50").conjuncts[0].predicate,
                                  AttributeValue{50.0}));
    EXPECT_FALSE(predicate_matches(SubgroupFilter::parse("a>50").conjuncts[0].predicate,
                                   AttributeValue{50.0}));
    EXPECT_TRUE(predicate_matches(SubgroupFilter::parse("a<=50").conjuncts[0].predicate,
                                  AttributeValue{50.0}));
    EXPECT_FALSE(predicate_matches(SubgroupFilter::parse("a<50").conjuncts[0].predicate,
                                   AttributeValue{50.0}));
}
