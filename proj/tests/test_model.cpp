#include <random>

#include <gtest/gtest.h>

#include "skillsec/errors.hpp"
#include "skillsec/schema.hpp"
#include "test_support.hpp"

using namespace skillsec;
using skillsec::testing::fixture;
using nlohmann::json;

namespace {

json minimal_manifest() {
    return json::parse(R"({
      "skill_id": "s1", "display_name": "Tiny", "invocation_name": "tiny skill",
      "categories": ["utility"], "endpoint_ref": "ep-s1",
      "intents": [{"name": "HelloIntent", "utterances": ["hello"]}]
    })");
}

json minimal_backend() {
    return json::parse(R"({
      "endpoint_ref": "ep-s1", "version": 1, "welcome_message": "Hi.",
      "handlers": [{"intent": "HelloIntent", "response": "Hello there."}]
    })");
}

}  // namespace

TEST(PermissionKind, ExactlyFourSensitive) {
    int sensitive = 0;
    for (auto k : {PermissionKind::Kind::FullName, PermissionKind::Kind::Address, PermissionKind::Kind::PhoneNumber,
                   PermissionKind::Kind::Email}) {
        sensitive += PermissionKind(k).sensitive();
    }
    EXPECT_EQ(sensitive, 4);
    EXPECT_FALSE(PermissionKind::other("device_address").sensitive());
    EXPECT_FALSE(PermissionKind::other("").sensitive());
    EXPECT_EQ(sensitive_kinds().size(), 4u);
}

TEST(PermissionKind, NamesRoundTrip) {
    for (const auto& k : sensitive_kinds()) {
        EXPECT_EQ(PermissionKind::from_name(k.name()), k);
        EXPECT_EQ(PermissionKind::from_placeholder(k.placeholder()), k);
    }
    EXPECT_EQ(PermissionKind::from_name("other:timezone"), PermissionKind::other("timezone"));
    EXPECT_FALSE(PermissionKind::from_name("nickname"));
    EXPECT_FALSE(PermissionKind::from_placeholder("nickname"));
}

TEST(ParseManifest, MinimalHasNoPermissions) {
    const auto m = manifest_from_json(minimal_manifest());
    EXPECT_TRUE(m.requested_permissions.empty());
    EXPECT_EQ(m.invocation_name, "tiny skill");
    EXPECT_EQ(m.categories, std::vector<std::string>{"Utility"});
}

TEST(ParseManifest, SusuAssistantRequestsAllFour) {
    const auto m = load_manifest_file(fixture("susu_assistant/manifest.json"));
    EXPECT_EQ(m.requested_sensitive().size(), 4u);
}

TEST(ParseManifest, InvocationNameMustBeLowercase) {
    auto doc = minimal_manifest();
    doc["invocation_name"] = "Tiny Skill";
    EXPECT_THROW(manifest_from_json(doc), SchemaError);
    doc["invocation_name"] = "";
    EXPECT_THROW(manifest_from_json(doc), SchemaError);
}

TEST(ParseManifest, RejectsThreeCategories) {
    auto doc = minimal_manifest();
    doc["categories"] = {"Utility", "News", "Game"};
    EXPECT_THROW(manifest_from_json(doc), SchemaError);
}

TEST(ParseManifest, RejectsUnknownCategoryAndKeys) {
    auto doc = minimal_manifest();
    doc["categories"] = {"Gardening"};
    EXPECT_THROW(manifest_from_json(doc), SchemaError);
    doc = minimal_manifest();
    doc["colour"] = "red";
    EXPECT_THROW(manifest_from_json(doc), SchemaError);
}

TEST(ParseManifest, MissingRequiredFields) {
    for (const char* key : {"skill_id", "display_name", "invocation_name", "categories", "intents", "endpoint_ref"}) {
        auto doc = minimal_manifest();
        doc.erase(key);
        EXPECT_THROW(manifest_from_json(doc), SchemaError) << key;
    }
}

TEST(ParseManifest, UtteranceRules) {
    auto doc = minimal_manifest();
    doc["intents"][0]["utterances"] = json::array();
    EXPECT_THROW(manifest_from_json(doc), SchemaError);

    doc = minimal_manifest();
    doc["intents"][0]["utterances"] = {"Hello", "hello!"};
    EXPECT_THROW(manifest_from_json(doc), SchemaError);

    doc = minimal_manifest();
    doc["intents"].push_back({{"name", "HelloIntent"}, {"utterances", {"hey"}}});
    EXPECT_THROW(manifest_from_json(doc), DuplicateIntentError);
}

TEST(ParseManifest, RejectsMalformedDocument) { EXPECT_THROW(parse_manifest("{not json"), SchemaError); }

TEST(ParseManifest, SlotTypes) {
    auto doc = minimal_manifest();
    doc["intents"][0]["slots"] = {{{"name", "n"}, {"type", "Number"}}, {{"name", "p"}, {"type", "PhoneNumber"}}};
    EXPECT_EQ(manifest_from_json(doc).intents[0].slots.size(), 2u);
    doc["intents"][0]["slots"] = {{{"name", "d"}, {"type", "Date"}}};
    EXPECT_THROW(manifest_from_json(doc), SchemaError);
}

TEST(ParseManifest, DuplicateInvocationNamesAllowedAcrossManifests) {
    auto a = minimal_manifest();
    auto b = minimal_manifest();
    b["skill_id"] = "s2";
    EXPECT_EQ(manifest_from_json(a).invocation_name, manifest_from_json(b).invocation_name);
}

TEST(ParseManifest, RoundTripFixtures) {
    for (const char* dir : {"joke_v1", "susu_assistant", "thingee_tech_talk", "daddy_saturday", "liquor_emporium",
                            "kids_email", "exfil_unrequested", "porn_feed"}) {
        const auto m = load_manifest_file(fixture(std::string(dir) + "/manifest.json"));
        EXPECT_EQ(parse_manifest(serialize_manifest(m)), m) << dir;
    }
}

TEST(ParseBackend, JokeVersions) {
    const auto m = load_manifest_file(fixture("joke_v1/manifest.json"));
    const auto v1 = load_backend_file(fixture("joke_v1/backend.json"), &m);
    const auto v2 = load_backend_file(fixture("joke_v2/backend.json"), &m);
    EXPECT_EQ(v1.version, 1);
    EXPECT_EQ(v2.version, 2);
    EXPECT_EQ(v1.find_rule("StartIntent")->question, "Do you want to hear a joke?");
    EXPECT_EQ(v2.find_rule("StartIntent")->question, "Are you home alone?");
    EXPECT_EQ(v2.find_rule("StartIntent")->exfiltrate, PermissionSet{PermissionKind::address()});
    EXPECT_EQ(parse_backend_spec(serialize_backend(v2), &m), v2);
}

TEST(ParseBackend, UnknownPlaceholder) {
    auto doc = minimal_backend();
    doc["handlers"][0]["response"] = "Hi {nickname}.";
    EXPECT_THROW(backend_from_json(doc), UnknownPlaceholderError);
    doc["handlers"][0]["response"] = "Hi {name";
    EXPECT_THROW(backend_from_json(doc), UnknownPlaceholderError);
}

TEST(ParseBackend, CrossValidation) {
    const auto m = manifest_from_json(minimal_manifest());
    auto doc = minimal_backend();
    doc["handlers"].push_back({{"intent", "GhostIntent"}, {"response", "boo"}});
    EXPECT_THROW(backend_from_json(doc, &m), UnknownIntentError);

    doc = minimal_backend();
    doc["handlers"] = json::array();
    EXPECT_THROW(backend_from_json(doc, &m), SchemaError);
}

TEST(ParseBackend, GateNeedsGatedResponse) {
    auto doc = minimal_backend();
    doc["handlers"][0]["gate"] = "open";
    EXPECT_THROW(backend_from_json(doc), SchemaError);
    doc["handlers"][0]["gated_response"] = "Closed.";
    EXPECT_NO_THROW(backend_from_json(doc));
}

TEST(ParseBackend, VersionMustBePositive) {
    auto doc = minimal_backend();
    doc["version"] = 0;
    EXPECT_THROW(backend_from_json(doc), SchemaError);
}

TEST(ParseBackend, FeedSourceResolvesAgainstBackendFile) {
    const auto b = load_backend_file(fixture("porn_feed/backend.json"));
    ASSERT_TRUE(b.feed);
    EXPECT_TRUE(std::filesystem::exists(b.feed->source)) << b.feed->source;
}

// Any template built from literal text and braces either parses with only
// sensitive placeholders or is rejected.
TEST(TemplateProperty, AcceptedPlaceholdersAreSensitive) {
    std::mt19937_64 rng(11);
    const std::vector<std::string> names{"name", "address", "phone", "email", "nickname", "city", "", "NAME"};
    const std::vector<std::string> words{"Hello", "your", "is", "at", "and", ".", " "};
    int accepted = 0;
    for (int i = 0; i < 2000; ++i) {
        std::string t;
        const int parts = 1 + static_cast<int>(rng() % 6);
        for (int p = 0; p < parts; ++p) {
            if (rng() % 3 == 0) {
                t += "{" + names[rng() % names.size()] + "}";
            } else {
                t += words[rng() % words.size()] + " ";
            }
        }
        auto doc = minimal_backend();
        doc["handlers"][0]["response"] = t;
        try {
            const auto b = backend_from_json(doc);
            ++accepted;
            for (const auto& k : template_placeholders(b.handlers[0].response_template)) EXPECT_TRUE(k.sensitive());
        } catch (const UnknownPlaceholderError&) {
            EXPECT_TRUE(t.find("{nickname}") != std::string::npos || t.find("{city}") != std::string::npos ||
                        t.find("{}") != std::string::npos || t.find("{NAME}") != std::string::npos)
                << t;
        }
    }
    EXPECT_GT(accepted, 100);
}

TEST(UserProfile, SentinelsAreDistinctMarkers) {
    const auto p = UserProfile::with_sentinels("u", 99);
    std::set<std::string> values;
    for (const auto& k : sensitive_kinds()) {
        const auto& s = p.sentinel(k);
        EXPECT_TRUE(s.starts_with("ZQX")) << s;
        values.insert(s);
    }
    EXPECT_EQ(values.size(), 4u);
    EXPECT_EQ(p.sentinel(PermissionKind::other("x")), "");
    const auto q = UserProfile::with_sentinels("u", 100);
    EXPECT_NE(p.full_name, q.full_name);
}

TEST(UserProfile, SentinelsNeverOccurInFixtureTemplates) {
    const auto p = UserProfile::with_sentinels("u", 1);
    for (const char* dir : {"joke_v1", "joke_v2", "susu_assistant", "daddy_saturday", "liquor_emporium"}) {
        const auto b = load_skill_dir(fixture(dir)).backend;
        for (const auto& r : b.handlers) {
            for (const auto& k : sensitive_kinds()) EXPECT_EQ(r.response_template.find(p.sentinel(k)), std::string::npos);
        }
    }
}
