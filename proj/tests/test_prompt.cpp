#include <doctest.h>

#include "contrastkit/error.hpp"
#include "contrastkit/prompt.hpp"
#include "oracles/prompt_oracle.hpp"

using namespace contrastkit;

namespace {

const ColorLexicon& css() { return ColorLexicon::css(); }

std::vector<std::string> matched(const Prompt& p) {
    std::vector<std::string> out;
    for (const auto& s : detect_color_terms(p, css())) out.push_back(p.text().substr(s.start, s.end - s.start));
    return out;
}

}  // namespace

TEST_SUITE("prompt") {

TEST_CASE("blank prompts are rejected") {
    CHECK_THROWS_AS(Prompt(""), ValidationError);
    CHECK_THROWS_AS(Prompt(" \t\n"), ValidationError);
    CHECK(Prompt("x").source() == PromptSource::user);
    CHECK(to_string(PromptSource::caption) == "caption");
}

TEST_CASE("single exact term") {
    const auto spans = detect_color_terms(Prompt("red leaves at dawn"), css());
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].start == 0);
    CHECK(spans[0].end == 3);
    CHECK(spans[0].matched_name == "red");
}

TEST_CASE("no chromatic terms") {
    CHECK(detect_color_terms(Prompt("morning light, wallpaper"), css()).empty());
}

TEST_CASE("longest multiword match wins") {
    const Prompt p("dark sea green moss, green hills");
    const auto spans = detect_color_terms(p, css());
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].matched_name == "dark sea green");
    CHECK(spans[0].start == 0);
    CHECK(spans[0].end == 14);
    CHECK(spans[1].matched_name == "green");
    CHECK(spans[1].start == 21);
    const auto oracle_spans = oracle::enumerate_spans(p.text(), css());
    CHECK(spans == oracle_spans);
}

TEST_CASE("whole words only and case-insensitive") {
    CHECK(matched(Prompt("reddish redwood greenery")).empty());
    CHECK(matched(Prompt("RED Blue")) == std::vector<std::string>{"RED", "Blue"});
    CHECK(matched(Prompt("über black")) == std::vector<std::string>{"black"});
    // A UTF-8 letter glued to a color name makes it part of a longer word.
    CHECK(matched(Prompt("redé")).empty());
}

TEST_CASE("hyphenated forms split into parts when no hyphenated name exists") {
    CHECK(matched(Prompt("blue-green wall")) == std::vector<std::string>{"blue", "green"});
    const ColorLexicon lex = ColorLexicon::parse("blue-green,#0d98ba\nblue,#0000ff\ngreen,#008000\n");
    const auto spans = detect_color_terms(Prompt("blue-green wall"), lex);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].matched_name == "blue-green");
}

TEST_CASE("clean_prompt substitutes the opposite color name") {
    const std::string opp = nearest_color_name(opposite_color({0, 0, 0}), css());
    CHECK(substitute_color_name({0, 0, 0}, css()) == opp);
    CHECK(clean_prompt(Prompt("red leaves"), {0, 0, 0}, css()).text() == opp + " leaves");
}

TEST_CASE("clean_prompt leaves colorless prompts untouched") {
    const Prompt p("macro shot of dew");
    CHECK(clean_prompt(p, {0.3, 0.2, 0.9}, css()) == p);
}

TEST_CASE("all occurrences get the same name") {
    const Prompt p("blue sky, blue sea");
    const std::string sub = substitute_color_name({1, 1, 1}, css());
    const Prompt out = clean_prompt(p, {1, 1, 1}, css());
    CHECK(out.text() == sub + " sky, " + sub + " sea");
    const auto after = detect_color_terms(out, css());
    CHECK(after.size() == detect_color_terms(p, css()).size());
    for (const auto& s : after) CHECK(s.matched_name == sub);
}

TEST_CASE("cleaning is idempotent and keeps the source") {
    const Prompt p("crimson velvet, gold trim", PromptSource::caption);
    const ColorRGB asset{0.9, 0.1, 0.1};
    const Prompt once = clean_prompt(p, asset, css());
    CHECK(once.source() == PromptSource::caption);
    CHECK(clean_prompt(once, asset, css()) == once);
}

TEST_CASE("fixture spans agree with the enumeration oracle") {
    const auto prompts = oracle::load_marked_prompts(CK_FIXTURE_DIR "/prompts_50.txt");
    REQUIRE(prompts.size() == 50);
    for (const auto& mp : prompts) {
        CAPTURE(mp.text);
        const auto got = detect_color_terms(Prompt(mp.text), css());
        CHECK(got == oracle::enumerate_spans(mp.text, css()));
        REQUIRE(got.size() == mp.spans.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].start == mp.spans[i].first);
            CHECK(got[i].end == mp.spans[i].second);
        }
    }
}

}
