// Regenerates the data/ copies of the built-in resources so the shipped
// files and the embedded defaults cannot drift apart.
#include <fstream>
#include <iostream>

#include "nerlink/context.hpp"
#include "nerlink/segment.hpp"
#include "nerlink/text.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_data_files <data-dir>\n";
    return 1;
  }
  std::string dir = argv[1];
  std::ofstream(dir + "/stopwords.txt") << nerlink::default_stoplist_text();
  std::ofstream(dir + "/lexicon.tsv") << nerlink::default_lexicon_text();
  std::ofstream(dir + "/tags.tsv") << nerlink::default_tag_lexicon_text();
  std::cout << "wrote stopwords.txt, lexicon.tsv, tags.tsv to " << dir << "\n";
  return 0;
}
