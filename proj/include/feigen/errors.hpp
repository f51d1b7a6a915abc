#ifndef FEIGEN_ERRORS_HPP
#define FEIGEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace feigen
{

// Every failure raised by the library derives from Error, so callers can
// catch the whole family or a single condition.
class Error : public std::runtime_error
{
  public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
};

#define FEIGEN_DEFINE_ERROR(Name)                                                                  \
    class Name : public Error                                                                      \
    {                                                                                              \
      public:                                                                                      \
        explicit Name(const std::string &what) : Error(#Name ": " + what) {}                       \
    }

// rounded scalars
FEIGEN_DEFINE_ERROR(DivisionByZeroInterval);
FEIGEN_DEFINE_ERROR(DivisionByZeroRectangle);
FEIGEN_DEFINE_ERROR(ParseError);

// function balls
FEIGEN_DEFINE_ERROR(DomainMismatch);
FEIGEN_DEFINE_ERROR(CompositionContractFailure);
FEIGEN_DEFINE_ERROR(PointOutsideDomain);
FEIGEN_DEFINE_ERROR(IndexBeyondTruncation);

// renormalisation operators
FEIGEN_DEFINE_ERROR(NormalizationSingular);
FEIGEN_DEFINE_ERROR(ContainmentFailure);
FEIGEN_DEFINE_ERROR(DepthExceeded);

// certifier
FEIGEN_DEFINE_ERROR(DimensionMismatch);
FEIGEN_DEFINE_ERROR(InversionUncertified);
FEIGEN_DEFINE_ERROR(TailContractFailure);

// approximation engine
FEIGEN_DEFINE_ERROR(NewtonDivergence);
FEIGEN_DEFINE_ERROR(EigenSelectionAmbiguous);
FEIGEN_DEFINE_ERROR(SingularJacobian);

// reporting
FEIGEN_DEFINE_ERROR(MissingCertificate);
FEIGEN_DEFINE_ERROR(ConfigError);

#undef FEIGEN_DEFINE_ERROR

} // namespace feigen

#endif // FEIGEN_ERRORS_HPP
