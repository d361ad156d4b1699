#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "dianet/cohort.hpp"
#include "dianet/errors.hpp"
#include "dianet/rng.hpp"

using namespace dianet;

namespace {

const char* kHeader =
    "id,age,sex,bmi,waist_cm,systolic_bp,diastolic_bp,qrs_duration,qt_interval,"
    "qt_corrected,pr_interval,avg_rr_interval,t_axis,label";

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::string three_row_csv() {
    std::string csv = std::string(kHeader) + "\n";
    csv += "a,50,1,27.5,90,120,70,95,390,400,160,900,38,1\n";
    csv += "b,41,0,24.1,82,110,65,92,385,402,158,880,35,0\n";
    csv += "c,63,1,31.0,101,131,80,99,400,405,170,910,42,1\n";
    return csv;
}

}  // namespace

TEST_CASE("well-formed CSV loads with every value in place") {
    const auto path = write_temp("cohort_ok.csv", three_row_csv());
    const Cohort cohort = load_cohort(path.string(), default_schema());
    REQUIRE(cohort.rows.size() == 3);
    CHECK(cohort.rows[0].id == "a");
    CHECK(cohort.rows[0].label == 1);
    CHECK(cohort.rows[1].label == 0);
    CHECK(cohort.rows[0].values[0] == 50.0);   // age
    CHECK(cohort.rows[0].values[1] == 1.0);    // sex
    CHECK(cohort.rows[2].values[11] == 42.0);  // t_axis
}

TEST_CASE("empty cells and NA become missing values") {
    std::string csv = std::string(kHeader) + "\n";
    csv += "a,50,1,,90,120,70,95,390,400,160,900,38,1\n";
    csv += "b,41,0,24.1,82,NA,65,92,385,402,158,880,35,0\n";
    const auto path = write_temp("cohort_missing.csv", csv);
    const Cohort cohort = load_cohort(path.string(), default_schema());
    CHECK_FALSE(cohort.rows[0].values[2].has_value());  // bmi empty
    CHECK_FALSE(cohort.rows[1].values[4].has_value());  // systolic NA
    CHECK(cohort.rows[1].values[2] == 24.1);
}

TEST_CASE("label outside {0,1} is rejected with the row index") {
    std::string csv = std::string(kHeader) + "\n";
    csv += "a,50,1,27.5,90,120,70,95,390,400,160,900,38,2\n";
    const auto path = write_temp("cohort_badlabel.csv", csv);
    CHECK_THROWS_AS(load_cohort(path.string(), default_schema()), LabelError);
}

TEST_CASE("schema violations are named") {
    SUBCASE("missing column") {
        std::string csv = "id,age,sex,label\n";
        csv += "a,50,1,1\n";
        const auto path = write_temp("cohort_missingcol.csv", csv);
        CHECK_THROWS_WITH_AS(load_cohort(path.string(), default_schema()),
                             doctest::Contains("bmi"), SchemaError);
    }
    SUBCASE("duplicate column") {
        std::string csv = std::string(kHeader) + ",age\n";
        csv += "a,50,1,27.5,90,120,70,95,390,400,160,900,38,1,51\n";
        const auto path = write_temp("cohort_dupcol.csv", csv);
        CHECK_THROWS_AS(load_cohort(path.string(), default_schema()), SchemaError);
    }
    SUBCASE("non-numeric continuous cell") {
        std::string csv = std::string(kHeader) + "\n";
        csv += "a,fifty,1,27.5,90,120,70,95,390,400,160,900,38,1\n";
        const auto path = write_temp("cohort_nonnum.csv", csv);
        CHECK_THROWS_WITH_AS(load_cohort(path.string(), default_schema()),
                             doctest::Contains("row 1"), ParseError);
    }
}

TEST_CASE("column order in the file is free; schema order is canonical") {
    // ECG columns permuted relative to the schema
    std::string csv =
        "label,t_axis,qrs_duration,id,age,sex,bmi,waist_cm,systolic_bp,diastolic_bp,"
        "qt_interval,qt_corrected,pr_interval,avg_rr_interval\n";
    csv += "1,38,95,a,50,1,27.5,90,120,70,390,400,160,900\n";
    const auto path = write_temp("cohort_permuted.csv", csv);
    const Cohort cohort = load_cohort(path.string(), default_schema());

    const auto straight = write_temp("cohort_straight.csv",
                                     std::string(kHeader) +
                                         "\na,50,1,27.5,90,120,70,95,390,400,160,900,38,1\n");
    const Cohort reference = load_cohort(straight.string(), default_schema());
    CHECK(cohort.rows[0].values == reference.rows[0].values);

    const Modalities a = split_modalities(cohort);
    const Modalities b = split_modalities(reference);
    CHECK(a.crf == b.crf);
    CHECK(a.ecg == b.ecg);
}

TEST_CASE("split_modalities keeps rows aligned") {
    const auto path = write_temp("cohort_split.csv", three_row_csv());
    const Cohort cohort = load_cohort(path.string(), default_schema());
    const Modalities mods = split_modalities(cohort);
    REQUIRE(mods.crf.size() == 3);
    REQUIRE(mods.ecg.size() == 3);
    REQUIRE(mods.labels.size() == 3);
    for (std::size_t i = 0; i < cohort.rows.size(); ++i) {
        CHECK(mods.labels[i] == cohort.rows[i].label);
        CHECK(mods.crf[i].size() == 6);
        CHECK(mods.ecg[i].size() == 6);
        CHECK(mods.crf[i][0] == cohort.rows[i].values[0]);
        CHECK(mods.ecg[i][5] == cohort.rows[i].values[11]);
    }
}

TEST_CASE("single-row cohort splits into 1x6 matrices") {
    std::string csv = std::string(kHeader) + "\n";
    csv += "only,50,1,27.5,90,120,70,95,390,400,160,900,38,0\n";
    const auto path = write_temp("cohort_one.csv", csv);
    const Modalities mods = split_modalities(load_cohort(path.string(), default_schema()));
    CHECK(mods.crf.size() == 1);
    CHECK(mods.ecg.size() == 1);
    CHECK(mods.labels == std::vector<int>{0});
}

TEST_CASE("save/load round-trip preserves values, missingness and labels") {
    // randomized cohort with missing cells and awkward decimals
    Rng rng(99);
    Cohort cohort;
    cohort.schema = default_schema();
    for (int r = 0; r < 40; ++r) {
        Record rec;
        rec.id = "row" + std::to_string(r);
        rec.label = rng.next_bernoulli(0.4) ? 1 : 0;
        for (int c = 0; c < 12; ++c) {
            if (rng.next_bernoulli(0.15)) {
                rec.values.emplace_back(std::nullopt);
            } else {
                rec.values.emplace_back(rng.next_normal(100.0, 37.3));
            }
        }
        cohort.rows.push_back(rec);
    }
    const auto path = std::filesystem::temp_directory_path() / "cohort_roundtrip.csv";
    save_cohort(path.string(), cohort);
    const Cohort back = load_cohort(path.string(), cohort.schema);
    REQUIRE(back.rows.size() == cohort.rows.size());
    for (std::size_t r = 0; r < cohort.rows.size(); ++r) {
        CHECK(back.rows[r].id == cohort.rows[r].id);
        CHECK(back.rows[r].label == cohort.rows[r].label);
        CHECK(back.rows[r].values == cohort.rows[r].values);  // bitwise via to_chars
    }
}
