#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "dgbo/errors.hpp"
#include "dgbo/records.hpp"

using namespace dgbo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "dgbo-test-XXXXXX").string();
        REQUIRE(mkdtemp(tmpl.data()) != nullptr);
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

EstimateRatioRecord sample_record(long trial) {
    EstimateRatioRecord r;
    r.lemma = "L31";
    r.case_kind = "high_low";
    r.N1 = 16;
    r.N2 = 1;
    r.N = 16;
    r.L1 = 4;
    r.L2 = 1;
    r.L = 2;
    r.r = 1.25;
    r.alpha = 0.25;
    r.trial = trial;
    r.seed = 0xfedcba9876543210ULL;
    r.j_value = 1.0 / 3.0;
    r.bound = 2.718281828459045e-7;
    r.norm_product = 123456.78901234567;
    r.ratio = r.j_value / (r.bound * r.norm_product) + 1e-300 * trial;
    return r;
}

}  // namespace

TEST_CASE("threshold subcommand") {
    const auto r = cli({"threshold", "--alpha", "1", "--r", "1.5"});
    CHECK(r.code == 0);
    CHECK(r.out == "-0.3333333333\n");
    const auto bad = cli({"threshold", "--alpha", "0.5", "--r", "1.6"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("1 < r < 1 + alpha") != std::string::npos);
}

TEST_CASE("validation errors exit with 2") {
    TempDir d;
    const auto r = cli({"solve", "--alpha", "1.5", "--out", d / "solve"});
    CHECK(r.code == 2);
    CHECK(r.err.find("(0, 1]") != std::string::npos);

    const auto u = cli({"frobnicate"});
    CHECK(u.code == 2);
    CHECK(u.err.find("unknown subcommand") != std::string::npos);
    CHECK(u.err.find("certify-bilinear") != std::string::npos);  // usage follows

    CHECK(cli({"solve", "--no-such-flag", "1"}).code == 2);
    CHECK(cli({"solve", "--nx", "abc"}).code == 2);
    CHECK(cli({"certify-bilinear", "--format", "xml"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"solve", "--config", d / "missing.cfg"}).code == 2);
}

TEST_CASE("runtime failures exit with 1") {
    TempDir d;
    // a regular file where the output directory should go
    std::ofstream(d / "blocker") << "x";
    const auto r = cli({"threshold", "--alpha", "1", "--r", "1.5"});
    REQUIRE(r.code == 0);
    const auto w = cli({"solve", "--T", "0.01", "--out", d / "blocker"});
    CHECK(w.code == 1);
    CHECK(w.err.find("blocker") != std::string::npos);
}

TEST_CASE("certify runs are byte-identical") {
    TempDir d;
    const std::vector<std::string> common{"certify-bilinear", "--lemma", "L31",   "--seed",       "7",
                                          "--N-max",          "8",     "--L-max", "4",            "--trials",
                                          "2",                "--r",   "1.5,2",   "--resolution", "8"};
    auto a = common, b = common;
    a.insert(a.end(), {"--out", d / "a"});
    b.insert(b.end(), {"--out", d / "b"});
    const auto ra = cli(a), rb = cli(b);
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(ra.out == rb.out);
    const auto ta = read_text(d / "a/certify-bilinear.jsonl"), tb = read_text(d / "b/certify-bilinear.jsonl");
    CHECK(!ta.empty());
    CHECK(ta == tb);
    CHECK(read_text(d / "a/certify-bilinear-alpha0.svg") == read_text(d / "b/certify-bilinear-alpha0.svg"));

    const auto recs = parse_estimate_records(d / "a/certify-bilinear.jsonl", Format::Jsonl);
    REQUIRE(!recs.empty());
    for (const auto& r : recs) {
        CHECK(r.lemma == "L31");
        CHECK(std::isfinite(r.ratio));
    }
}

TEST_CASE("rerun from the manifest reproduces the records") {
    TempDir d;
    const auto first = cli({"certify-bilinear", "--lemma", "L32a", "--seed", "3", "--N-max", "8", "--L-max", "2",
                            "--trials", "2", "--resolution", "8", "--b-epsilon", "0.0312345678901234", "--format",
                            "csv", "--out", d / "one"});
    REQUIRE(first.code == 0);
    const auto cfg = read_text(d / "one/manifest.cfg");
    CHECK(cfg.find("b-epsilon = 0.0312345678901234") != std::string::npos);

    // the manifest names its own output directory; point the rerun elsewhere
    const auto second = cli({"certify-bilinear", "--config", d / "one/manifest.cfg", "--out", d / "two"});
    REQUIRE(second.code == 0);
    CHECK(read_text(d / "one/certify-bilinear.csv") == read_text(d / "two/certify-bilinear.csv"));
    CHECK(read_text(d / "two/manifest.cfg").find("b-epsilon = 0.0312345678901234") != std::string::npos);

    std::ofstream(d / "bad.cfg") << "lemma = L31\nno_such_key = 1\n";
    const auto bad = cli({"certify-bilinear", "--config", d / "bad.cfg", "--out", d / "three"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("no_such_key") != std::string::npos);
}

TEST_CASE("config values yield to flags") {
    TempDir d;
    std::ofstream(d / "t.cfg") << "# comment\nalpha = 0.5\nr = 1.25  # trailing\n";
    CHECK(cli({"threshold", "--config", d / "t.cfg"}).out == "0.3\n");
    CHECK(cli({"threshold", "--config", d / "t.cfg", "--alpha", "1", "--r", "1.5"}).out == "-0.3333333333\n");
}

TEST_CASE("emit_records: empty csv is header only") {
    TempDir d;
    const std::vector<EstimateRatioRecord> none;
    const auto bytes = emit_records(none, Format::Csv, d / "e.csv");
    const auto text = read_text(d / "e.csv");
    CHECK(bytes == text.size());
    CHECK(text ==
          "lemma,case,N1,N2,N,L1,L2,L,r,alpha,trial,seed,j_value,bound,norm_product,ratio\n");
    CHECK(parse_rows(text, Format::Csv).empty());
    emit_records(none, Format::Jsonl, d / "e.jsonl");
    CHECK(read_text(d / "e.jsonl").empty());
}

TEST_CASE("emit_records: one jsonl record is one line") {
    TempDir d;
    emit_records(std::vector{sample_record(0)}, Format::Jsonl, d / "one.jsonl");
    const auto text = read_text(d / "one.jsonl");
    REQUIRE(!text.empty());
    CHECK(text.back() == '\n');
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    CHECK(text.rfind("{\"lemma\":\"L31\",\"case\":\"high_low\",\"N1\":16,", 0) == 0);
}

TEST_CASE("emit then parse is the identity") {
    TempDir d;
    std::vector<EstimateRatioRecord> recs;
    for (long t = 0; t < 5; ++t) recs.push_back(sample_record(t));
    recs[3].ratio = 0.0;
    recs[4].j_value = -5e-324;
    for (Format f : {Format::Jsonl, Format::Csv}) {
        const std::string p = d / (std::string("r.") + extension(f));
        emit_records(recs, f, p);
        CHECK(parse_estimate_records(p, f) == recs);
        // identical input, identical bytes
        const auto once = read_text(p);
        emit_records(recs, f, p);
        CHECK(read_text(p) == once);
    }
}

TEST_CASE("doubles keep 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_double(INFINITY) == "inf");
    CHECK(format_double(-INFINITY) == "-inf");
    CHECK(format_double(NAN) == "nan");
    CHECK_THROWS_AS(parse_format("xml"), ValidationError);
}

TEST_CASE("unwritable record path") {
    TempDir d;
    CHECK_THROWS_AS(emit_records(std::vector{sample_record(0)}, Format::Csv, d / "no/such/dir/x.csv"), RuntimeFailure);
}

TEST_CASE("probe and sweep subcommands write their tables") {
    TempDir d;
    const auto p = cli({"probe-illposedness", "--N-min", "4", "--N-max", "16", "--alpha", "0.25", "--s", "0", "--r",
                        "1.2,2", "--format", "csv", "--out", d / "p"});
    REQUIRE(p.code == 0);
    const auto rows = parse_rows(read_text(d / "p/probe-illposedness.csv"), Format::Csv);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].at("space") == "FL");
    CHECK(rows[5].at("space") == "H");
    CHECK(fs::exists(d / "p/manifest.json"));

    const auto s = cli({"sweep", "--alpha", "1", "--r", "1.9", "--offset", "0.5", "--T", "0.1", "--nx", "64",
                        "--nt", "128", "--out", d / "s"});
    REQUIRE(s.code == 0);
    const auto srows = parse_rows(read_text(d / "s/sweep.jsonl"), Format::Jsonl);
    REQUIRE(srows.size() == 1);
    CHECK(srows[0].at("converged") == "true");
    CHECK(srows[0].at("error").empty());
}
