#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "polysemy/chat.hpp"
#include "polysemy/util.hpp"

using namespace polysemy;
using chat::RoleClass;

namespace {

std::string fixture(const std::string& rel) {
    return util::read_file(std::string(POLYSEMY_FIXTURE_DIR) + "/" + rel);
}

const char* kMinimal =
    "@Participants:\tCHI Target_Child, MOT Mother\n"
    "@ID:\teng|mini|CHI|1;00.00|||||Target_Child|||\n"
    "*CHI:\tdog .\n";

}  // namespace

TEST_CASE("age field parsing") {
    CHECK(chat::parse_age_months("1;00.00") == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(chat::parse_age_months("2;06.14") ==
          doctest::Approx(12.0 * 2 + 6 + 14.0 / 30.4375).epsilon(1e-12));
    CHECK(chat::parse_age_months("3;02") == doctest::Approx(38.0).epsilon(1e-12));
    CHECK_THROWS_AS(chat::parse_age_months("thirty"), DataError);
    CHECK_THROWS_AS(chat::parse_age_months(""), DataError);
    CHECK_THROWS_AS(chat::parse_age_months("2;six"), DataError);

    // lexicographically larger (Y, MM, DD) triples give strictly larger ages
    double prev = -1.0;
    for (int y = 0; y <= 3; ++y)
        for (int mm = 0; mm <= 11; ++mm)
            for (int dd = 0; dd <= 30; ++dd) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%d;%02d.%02d", y, mm, dd);
                const double months = chat::parse_age_months(buf);
                CHECK(months > prev);
                prev = months;
            }
}

TEST_CASE("role mapping") {
    CHECK(chat::map_role("MOT", "Mother") == RoleClass::Mother);
    CHECK(chat::map_role("INV", "Investigator") == RoleClass::Investigator);
    CHECK(chat::map_role("SIS", "Sister") == RoleClass::Other);
    CHECK(chat::map_role("CHI", "Target_Child") == RoleClass::TargetChild);
    CHECK(chat::map_role("FAT", "Father") == RoleClass::Father);
    CHECK(chat::map_role("PAT", "") == RoleClass::Father);
    CHECK(chat::map_role("chi", "") == RoleClass::TargetChild);
    CHECK(chat::map_role("MOT", "mother") == RoleClass::Mother);
    // the role label wins over the code when they disagree
    CHECK(chat::map_role("CHI", "Sister") == RoleClass::Other);
    CHECK(chat::map_role("XYZ", "Target_Child") == RoleClass::TargetChild);
}

TEST_CASE("minimal well-formed file") {
    const auto t = chat::parse(kMinimal, "mini");
    REQUIRE(t.utterances.size() == 1);
    CHECK(t.utterances[0].speaker_code == "CHI");
    CHECK(t.utterances[0].tokens == std::vector<std::string>{"dog"});
    CHECK(t.child_age_months == doctest::Approx(12.0));
    CHECK(t.participants.at("MOT").role == RoleClass::Mother);
}

TEST_CASE("parse errors name the offending line") {
    SUBCASE("no @Participants") {
        CHECK_THROWS_WITH_AS(chat::parse("@UTF8\n", "x"),
                             doctest::Contains("@Participants"), DataError);
    }
    SUBCASE("main tier before participants") {
        try {
            chat::parse("*CHI:\thi .\n", "x");
            FAIL("expected throw");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("line 1") != std::string::npos);
        }
    }
    SUBCASE("unknown speaker") {
        const std::string text = std::string(kMinimal) + "*DAD:\thello .\n";
        try {
            chat::parse(text, "x");
            FAIL("expected throw");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("DAD") != std::string::npos);
            CHECK(std::string(e.what()).find("line 4") != std::string::npos);
        }
    }
    SUBCASE("missing target-child age is a session rejection") {
        const char* text =
            "@Participants:\tCHI Target_Child\n"
            "*CHI:\thi .\n";
        CHECK_THROWS_WITH_AS(chat::parse(text, "x"), doctest::Contains("session rejected"),
                             DataError);
    }
    SUBCASE("unparseable age is a session rejection") {
        const char* text =
            "@Participants:\tCHI Target_Child\n"
            "@ID:\teng|c|CHI|unknown|||||Target_Child|||\n"
            "*CHI:\thi .\n";
        CHECK_THROWS_WITH_AS(chat::parse(text, "x"), doctest::Contains("session rejected"),
                             DataError);
    }
}

TEST_CASE("token cleaning") {
    CHECK(chat::clean_tokens("<I want> [/] I want the ball .") ==
          std::vector<std::string>{"I", "want", "I", "want", "the", "ball"});
    CHECK(chat::clean_tokens("truck go +...") == std::vector<std::string>{"truck", "go"});
    CHECK(chat::clean_tokens("what ? !") == std::vector<std::string>{"what"});
    CHECK(chat::clean_tokens("") == std::vector<std::string>{});
}

TEST_CASE("session01 fixture matches the hand-built golden structure") {
    const auto t = chat::parse(fixture("chat/session01.cha"), "session01");
    const auto golden = nlohmann::json::parse(fixture("golden/session01_parsed.json"));

    CHECK(t.corpus_name == golden["corpus"].get<std::string>());
    CHECK(t.child_age_raw == golden["child_age_raw"].get<std::string>());
    CHECK(t.child_age_months == doctest::Approx(12.0 * 2 + 6 + 14.0 / 30.4375).epsilon(1e-12));
    CHECK(t.mor_dropped_misaligned == golden["mor_dropped_misaligned"].get<int>());

    REQUIRE(golden["participants"].size() == t.participants.size());
    std::size_t pi = 0;
    for (const auto& [code, p] : t.participants) {
        const auto& gp = golden["participants"][pi++];
        CHECK(code == gp["code"].get<std::string>());
        CHECK(p.role_label == gp["role_label"].get<std::string>());
        CHECK(chat::role_name(p.role) == gp["role"].get<std::string>());
    }

    REQUIRE(t.utterances.size() == golden["utterances"].size());
    for (std::size_t i = 0; i < t.utterances.size(); ++i) {
        const auto& u = t.utterances[i];
        const auto& gu = golden["utterances"][i];
        CHECK(u.speaker_code == gu["speaker"].get<std::string>());
        CHECK(u.tokens == gu["tokens"].get<std::vector<std::string>>());
        if (gu.contains("mor")) {
            REQUIRE(u.mor.has_value());
            REQUIRE(u.mor->size() == gu["mor"].size());
            for (std::size_t k = 0; k < u.mor->size(); ++k) {
                CHECK((*u.mor)[k].category_code == gu["mor"][k]["category"].get<std::string>());
                CHECK((*u.mor)[k].lemma == gu["mor"][k]["lemma"].get<std::string>());
            }
        } else {
            CHECK_FALSE(u.mor.has_value());
        }
    }
}

TEST_CASE("tokens_by_role keeps document order and is empty for absent roles") {
    const auto t = chat::parse(fixture("chat/session01.cha"), "session01");
    CHECK(chat::tokens_by_role(t, RoleClass::Father).empty());

    std::istringstream golden(fixture("golden/session01_mother_tokens.txt"));
    std::vector<std::string> want;
    for (std::string line; std::getline(golden, line);)
        if (!line.empty()) want.push_back(line);
    REQUIRE(want.size() == 58);
    CHECK(chat::tokens_by_role(t, RoleClass::Mother) == want);

    // role streams partition the tokens of the four analyzed roles
    std::size_t by_roles = 0;
    for (RoleClass r : {RoleClass::TargetChild, RoleClass::Mother, RoleClass::Father,
                        RoleClass::Investigator})
        by_roles += chat::tokens_by_role(t, r).size();
    std::size_t direct = 0;
    for (const auto& u : t.utterances)
        if (t.participants.at(u.speaker_code).role != RoleClass::Other) direct += u.tokens.size();
    CHECK(by_roles == direct);
}

TEST_CASE("normalized round-trip preserves the structure") {
    const auto t = chat::parse(fixture("chat/session01.cha"), "session01");
    const auto t2 = chat::parse(chat::to_normalized_chat(t), "session01");
    CHECK(t2.corpus_name == t.corpus_name);
    CHECK(t2.child_age_months == t.child_age_months);
    REQUIRE(t2.participants.size() == t.participants.size());
    for (const auto& [code, p] : t.participants) {
        CHECK(t2.participants.at(code).role == p.role);
        CHECK(t2.participants.at(code).role_label == p.role_label);
    }
    REQUIRE(t2.utterances.size() == t.utterances.size());
    for (std::size_t i = 0; i < t.utterances.size(); ++i) {
        CHECK(t2.utterances[i].speaker_code == t.utterances[i].speaker_code);
        CHECK(t2.utterances[i].tokens == t.utterances[i].tokens);
        CHECK(t2.utterances[i].mor.has_value() == t.utterances[i].mor.has_value());
    }

    // a second round-trip is byte-stable
    CHECK(chat::to_normalized_chat(t2) == chat::to_normalized_chat(t));
}

TEST_CASE("json dump is valid and carries the session") {
    const auto t = chat::parse(kMinimal, "mini");
    const auto j = nlohmann::json::parse(chat::to_json(t));
    CHECK(j["session_id"] == "mini");
    CHECK(j["utterances"].size() == 1);
}
