// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"
#include "linrank/linalg.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = linrank::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string loop(const std::string& name) { return std::string(LINRANK_LOOPS_DIR) + "/" + name + ".loop"; }
std::string data(const std::string& name) { return std::string(LINRANK_TEST_DATA_DIR) + "/" + name; }

json analyze_json(std::vector<std::string> args) {
    args.insert(args.begin(), "analyze");
    args.push_back("--format");
    args.push_back("json");
    auto r = run(args);
    return json::parse(r.out);
}

linrank::Rational q(const json& j) { return linrank::parse_rational(j.get<std::string>()); }

} // namespace

TEST(Cli, LrfFoundOnLoop1) {
    auto r = run({"analyze", "--mode", "lrf", "--domain", "int", loop("loop1"), "--format", "json"});
    EXPECT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["verdict"], "found");
    EXPECT_TRUE(j.contains("function"));
    auto c = run({"analyze", "--mode", "lrf", "--domain", "int", loop("loop1"), "--check", data("loop1_lrf.check")});
    EXPECT_EQ(c.code, 0) << c.out << c.err;
    EXPECT_NE(c.out.find("check passed"), std::string::npos);
}

TEST(Cli, ReferenceFunctionsPassCheck) {
    for (const char* name : {"loop1", "loop2", "loop26", "loop27"}) {
        auto c = run({"analyze", "--mode", "lrf", loop(name), "--check", data(std::string(name) + "_lrf.check")});
        EXPECT_EQ(c.code, 0) << name << c.out << c.err;
    }
    auto wrong = run({"analyze", "--mode", "lrf", loop("loop1"), "--check", data("loop1_wrong.check")});
    EXPECT_EQ(wrong.code, 1);
    EXPECT_NE(wrong.out.find("check failed"), std::string::npos);
}

TEST(Cli, LlrfWithBoundOnLoop41) {
    auto j = analyze_json({"--mode", "llrf", "--domain", "rat", loop("loop41"), "--bound", "2,3,1"});
    EXPECT_EQ(j["verdict"], "found");
    ASSERT_TRUE(j.contains("strong"));
    const auto& f = j["strong"]["function"];
    EXPECT_EQ(f["components"].size(), f["deltas"].size());
    // Sum over the components of floor(value / delta) + 1, stopping at the first negative one.
    std::vector<linrank::Rational> x0{2, 3, 1};
    linrank::Integer expected = 0;
    for (std::size_t i = 0; i < f["components"].size(); ++i) {
        const auto& c = f["components"][i];
        linrank::Rational v = q(c["constant"]);
        for (std::size_t k = 0; k < 3; ++k) {
            v += q(c["coeffs"][k]) * x0[k];
        }
        if (v < 0) {
            break;
        }
        linrank::Rational ratio = v / q(f["deltas"][i]);
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
        expected += fl + 1;
    }
    EXPECT_EQ(j["bound"]["value"], expected.get_str());
    EXPECT_EQ(j["bound"]["x0"], (json{"2", "3", "1"}));
}

TEST(Cli, LrfWitnessOnLoop3) {
    auto r = run({"analyze", "--mode", "lrf", "--domain", "int", loop("loop3"), "--witness", "--format", "json"});
    EXPECT_EQ(r.code, 1);
    auto j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "none");
    ASSERT_TRUE(j.contains("witness"));
    EXPECT_LE(j["witness"]["size"].get<int>(), 2 * 2 + 3);
}

TEST(Cli, WitnessFiles) {
    EXPECT_EQ(run({"analyze", "--mode", "llrf", loop("descent"), "--check", data("descent_witness.check")}).code, 0);
    auto m = run({"analyze", "--mode", "llrf", loop("descent"), "--check", data("descent_mutated.check")});
    EXPECT_EQ(m.code, 1);
    EXPECT_NE(m.out.find("check failed: "), std::string::npos);
    EXPECT_EQ(run({"analyze", "--mode", "lrf", loop("drift"), "--check", data("drift_witness.check")}).code, 0);
    auto d = run({"analyze", "--mode", "lrf", loop("drift"), "--check", data("drift_mutated.check")});
    EXPECT_EQ(d.code, 1);
    EXPECT_NE(d.out.find("not a transition"), std::string::npos);
}

TEST(Cli, LlrfCandidates) {
    EXPECT_EQ(run({"analyze", "--mode", "llrf", "--domain", "rat", loop("loop41"), "--check", data("loop41_strong.check")}).code, 0);
    EXPECT_EQ(run({"analyze", "--mode", "llrf", "--domain", "rat", loop("loop41"), "--check", data("loop41_weak.check")}).code, 0);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"analyze", "--mode", "llrf", loop("loop12_unbounded")}).code, 1);
    auto nonterm = run({"analyze", "--mode", "lrf", "--domain", "rat", loop("loop1")});
    EXPECT_EQ(nonterm.code, 1);
    EXPECT_EQ(run({"analyze", "--mode", "bogus", loop("loop1")}).code, 64);
    EXPECT_EQ(run({"analyze"}).code, 64);
    EXPECT_EQ(run({"analyze", loop("loop1"), "--hull", "octagon=sometimes"}).code, 64);
    EXPECT_EQ(run({"analyze", loop("loop1"), "--bound", "1,2,3"}).code, 64);
    EXPECT_EQ(run({"analyze", "/nonexistent/file.loop"}).code, 66);
    auto bad = run({"analyze", loop("loop1"), "--check", data("bad_variable.check")});
    EXPECT_EQ(bad.code, 65);
    EXPECT_NE(bad.err.find("bad_variable.check:2:"), std::string::npos) << bad.err;
}

TEST(Cli, NonTerminatingAndParseErrors) {
    std::string dir = testing::TempDir();
    std::string fix = dir + "/fixpoint.loop";
    std::ofstream(fix) << "vars: x\npath:\n  guard: x >= 0\n  update: x' = x\n";
    EXPECT_EQ(run({"analyze", "--mode", "lrf", fix}).code, 2);
    EXPECT_EQ(run({"analyze", "--mode", "llrf", "--domain", "rat", fix}).code, 2);
    std::string broken = dir + "/broken.loop";
    std::ofstream(broken) << "vars: x\npath:\n  guard: x > 0\n";
    auto r = run({"analyze", broken});
    EXPECT_EQ(r.code, 65);
    EXPECT_NE(r.err.find("broken.loop:3:"), std::string::npos) << r.err;
}

TEST(Cli, BatchAndDeterminism) {
    auto a = analyze_json({"--mode", "llrf", loop("loop3"), loop("loop12"), loop("descent"), "--witness"});
    ASSERT_TRUE(a.is_array());
    ASSERT_EQ(a.size(), 3U);
    EXPECT_EQ(a[0]["verdict"], "found");
    EXPECT_EQ(a[2]["verdict"], "none");
    auto b = analyze_json({"--mode", "llrf", loop("loop3"), loop("loop12"), loop("descent"), "--witness"});
    for (auto* j : {&a, &b}) {
        for (auto& e : *j) {
            e.erase("time_ms");
        }
    }
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Cli, EnginesAgree) {
    for (const char* name : {"loop1", "loop3", "combined", "octagon3"}) {
        auto e = analyze_json({"--mode", "lrf", loop(name)});
        auto g = analyze_json({"--mode", "lrf", "--engine", "generators", loop(name)});
        EXPECT_EQ(e["verdict"], g["verdict"]) << name;
    }
}

TEST(Cli, OctagonClosureMarksIncompleteness) {
    auto j = analyze_json({"--mode", "lrf", loop("octagon3"), "--hull", "octagon=closure"});
    ASSERT_TRUE(j.contains("hull"));
    EXPECT_TRUE(j["hull"].contains("exact"));
    auto exact = analyze_json({"--mode", "lrf", loop("octagon3"), "--hull", "octagon=exact"});
    EXPECT_EQ(exact["hull"]["exact"], true);
    EXPECT_EQ(exact["verdict"], "found");
}

TEST(Cli, Help) {
    auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("analyze"), std::string::npos);
}
