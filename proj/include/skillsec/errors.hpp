#pragma once

#include <stdexcept>
#include <string>

namespace skillsec {

// Base of every error the library raises. Callers that only need to map
// errors to an exit code can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SKILLSEC_DEFINE_ERROR(Name)          \
    class Name : public Error {              \
    public:                                  \
        using Error::Error;                  \
    }

// skill-model
SKILLSEC_DEFINE_ERROR(SchemaError);
SKILLSEC_DEFINE_ERROR(DuplicateIntentError);
SKILLSEC_DEFINE_ERROR(UnknownIntentError);
SKILLSEC_DEFINE_ERROR(UnknownPlaceholderError);
SKILLSEC_DEFINE_ERROR(FormatError);
SKILLSEC_DEFINE_ERROR(EmptyFeedError);

// ecosystem
SKILLSEC_DEFINE_ERROR(UnknownSkillError);
SKILLSEC_DEFINE_ERROR(NoSuchInvocationError);
SKILLSEC_DEFINE_ERROR(VersionError);
SKILLSEC_DEFINE_ERROR(SessionError);

// vetting
SKILLSEC_DEFINE_ERROR(SuiteEmptyError);
SKILLSEC_DEFINE_ERROR(MismatchedSkillError);

// question guard
SKILLSEC_DEFINE_ERROR(EmptyTextError);
SKILLSEC_DEFINE_ERROR(SidecarUnavailableError);
SKILLSEC_DEFINE_ERROR(EmptyBlacklistError);
SKILLSEC_DEFINE_ERROR(LineageError);

// content monitor
SKILLSEC_DEFINE_ERROR(FetchError);
SKILLSEC_DEFINE_ERROR(SizeCapError);
SKILLSEC_DEFINE_ERROR(EmptyLexiconError);

// analytics
SKILLSEC_DEFINE_ERROR(EmptyCorpusError);

// cli
SKILLSEC_DEFINE_ERROR(UsageError);
SKILLSEC_DEFINE_ERROR(ConfigError);

#undef SKILLSEC_DEFINE_ERROR

}  // namespace skillsec
