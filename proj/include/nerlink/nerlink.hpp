#pragma once

// Umbrella header for the full engine. The remote backend and HTTP service
// live in kb_remote.hpp / service.hpp and are included here as well; include
// individual headers instead if you want to avoid the httplib dependency.

#include "nerlink/context.hpp"
#include "nerlink/discourse.hpp"
#include "nerlink/errors.hpp"
#include "nerlink/eval.hpp"
#include "nerlink/kb.hpp"
#include "nerlink/kb_remote.hpp"
#include "nerlink/output.hpp"
#include "nerlink/pipeline.hpp"
#include "nerlink/rank.hpp"
#include "nerlink/segment.hpp"
#include "nerlink/service.hpp"
#include "nerlink/text.hpp"
