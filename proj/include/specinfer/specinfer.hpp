#pragma once

#include "specinfer/doc_model.hpp"
#include "specinfer/error.hpp"
#include "specinfer/eval.hpp"
#include "specinfer/inference.hpp"
#include "specinfer/javadoc.hpp"
#include "specinfer/matching.hpp"
#include "specinfer/memop.hpp"
#include "specinfer/name_semantics.hpp"
#include "specinfer/once_cache.hpp"
#include "specinfer/output.hpp"
#include "specinfer/score_cache.hpp"
#include "specinfer/sentence.hpp"
#include "specinfer/value_graph.hpp"
