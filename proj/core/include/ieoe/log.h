#ifndef IEOE_LOG_H_
#define IEOE_LOG_H_

#include <functional>
#include <string>

namespace ieoe {

// Warnings go to stderr unless a sink is installed (tests install one to
// capture or silence them). The sink may be called from worker threads.
using WarningSink = std::function<void(const std::string&)>;

void SetWarningSink(WarningSink sink);
void Warn(const std::string& message);

}  // namespace ieoe

#endif  // IEOE_LOG_H_
