#pragma once

#include "corpus.hpp"
#include "embed.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "gcn.hpp"
#include "graph.hpp"
#include "lexer.hpp"
#include "normalize.hpp"
#include "pipeline.hpp"
#include "slicer.hpp"
#include "synthetic.hpp"
