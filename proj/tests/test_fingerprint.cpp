#include "unseen/fingerprint.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

using namespace unseen;

TEST_CASE("histogram construction") {
    const Histogram h = build_histogram({"a", "b", "a"});
    CHECK(h.n == 3);
    CHECK(h.counts.at("a") == 2);
    CHECK(h.counts.at("b") == 1);

    CHECK(build_histogram({}).n == 0);
    CHECK(build_histogram({}).counts.empty());

    SECTION("one symbol, one million occurrences") {
        Histogram big;
        for (int i = 0; i < 1000000; ++i) big.add("x");
        CHECK(big.n == 1000000);
        CHECK(big.counts.at("x") == 1000000);
    }
}

TEST_CASE("fingerprint construction") {
    Histogram h;
    h.add("a", 2);
    h.add("b", 1);
    Fingerprint f = build_fingerprint(h);
    CHECK(f.n == 3);
    CHECK(f.at(1) == 1);
    CHECK(f.at(2) == 1);
    CHECK(f.distinct() == 2);

    CHECK(build_fingerprint(Histogram{}).n == 0);
    CHECK(build_fingerprint(Histogram{}).phi.empty());

    Histogram h2;
    h2.add("a", 3);
    h2.add("b", 3);
    h2.add("c", 1);
    f = build_fingerprint(h2);
    CHECK(f.n == 7);
    CHECK(f.at(1) == 1);
    CHECK(f.at(3) == 2);
    CHECK(f.at(2) == 0);
}

TEST_CASE("fingerprint properties over random streams") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t len = rng() % 200;
        std::vector<std::string> stream(len);
        for (auto& s : stream) s = "s" + std::to_string(rng() % 20);
        const Fingerprint f = build_fingerprint(build_histogram(stream));

        std::uint64_t mass = 0;
        for (const auto& [j, c] : f.phi) mass += j * c;
        CHECK(mass == len);
        CHECK(f.n == len);

        // Relabeling symbols leaves the fingerprint unchanged.
        std::vector<std::string> relabeled(stream);
        for (auto& s : relabeled) s = "t" + s;
        const Fingerprint g = build_fingerprint(build_histogram(relabeled));
        CHECK(f.phi == g.phi);
    }
}

TEST_CASE("word tokenizer") {
    CHECK(tokenize_words("To be, to be!") == std::vector<std::string>{"to", "be", "to", "be"});
    CHECK(tokenize_words("Hamlet's") == std::vector<std::string>{"hamlet", "s"});
    CHECK(tokenize_words("").empty());
    CHECK(tokenize_words("  \t\n ").empty());
    CHECK(tokenize_words("x2y") == std::vector<std::string>{"x", "y"});
    CHECK(tokenize_words("don't stop-me now123") ==
          std::vector<std::string>{"don", "t", "stop", "me", "now"});

    SECTION("well-formed multi-byte sequences delimit") {
        CHECK(tokenize_words("caf\xc3\xa9 bar") == std::vector<std::string>{"caf", "bar"});
    }
    SECTION("malformed UTF-8 is rejected") {
        CHECK_THROWS_AS(tokenize_words("ab\xffxy"), parse_error);
        CHECK_THROWS_AS(tokenize_words("ab\xc3"), parse_error);
        CHECK_THROWS_AS(tokenize_words("ab\xc3Z"), parse_error);
    }
}

TEST_CASE("counts file parsing") {
    std::istringstream in("a\t2\nb\t1\n");
    const Fingerprint f = parse_input(in, InputFormat::counts);
    CHECK(f.n == 3);
    CHECK(f.at(1) == 1);
    CHECK(f.at(2) == 1);

    SECTION("malformed records") {
        std::istringstream bad1("a 2\n");
        CHECK_THROWS_AS(parse_counts(bad1), parse_error);
        std::istringstream bad2("a\t0\n");
        CHECK_THROWS_AS(parse_counts(bad2), parse_error);
        std::istringstream bad3("a\t-3\n");
        CHECK_THROWS_AS(parse_counts(bad3), parse_error);
        std::istringstream bad4("a\t2\na\t5\n");
        CHECK_THROWS_AS(parse_counts(bad4), parse_error);
        std::istringstream bad5("\t2\n");
        CHECK_THROWS_AS(parse_counts(bad5), parse_error);
    }
}

TEST_CASE("fingerprint file parsing") {
    std::istringstream in("1 2\n2 1\n");
    const Fingerprint f = parse_input(in, InputFormat::fingerprint);
    CHECK(f.at(1) == 2);
    CHECK(f.at(2) == 1);
    CHECK(f.n == 4);
    CHECK(f.distinct() == 3);

    SECTION("declared sample size is validated") {
        std::istringstream ok("# n = 4\n1 2\n2 1\n");
        CHECK(parse_fingerprint(ok).n == 4);
        std::istringstream bad("# n = 5\n1 2\n2 1\n");
        CHECK_THROWS_AS(parse_fingerprint(bad), parse_error);
    }
    SECTION("invariant violations") {
        std::istringstream neg("1 2\n2 -1\n");
        CHECK_THROWS_AS(parse_fingerprint(neg), parse_error);
        std::istringstream dup("1 2\n1 3\n");
        CHECK_THROWS_AS(parse_fingerprint(dup), parse_error);
        std::istringstream desc("3 2\n1 3\n");
        CHECK_THROWS_AS(parse_fingerprint(desc), parse_error);
        std::istringstream zero("0 2\n");
        CHECK_THROWS_AS(parse_fingerprint(zero), parse_error);
    }
}

TEST_CASE("text input parsing") {
    std::istringstream in("To be, or not to be: that is the question.");
    const Fingerprint f = parse_input(in, InputFormat::text);
    // to:2 be:2 or:1 not:1 that:1 is:1 the:1 question:1
    CHECK(f.n == 10);
    CHECK(f.at(1) == 6);
    CHECK(f.at(2) == 2);
}

TEST_CASE("format names") {
    CHECK(parse_format("counts") == InputFormat::counts);
    CHECK(parse_format("fingerprint") == InputFormat::fingerprint);
    CHECK(parse_format("text") == InputFormat::text);
    CHECK_THROWS_AS(parse_format("tsv"), parse_error);
}
