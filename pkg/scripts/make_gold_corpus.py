"""Regenerate the bundled gold corpus (src/annotext/data/gold/gold.jsonl).

Every mention the demo dictionaries extract is annotated: with the entity
the sentence is about, or with NIL for function words. Output is
deterministic for a fixed seed.
"""

import json
import random
import sys
from pathlib import Path

from annotext import DEMO_MANIFEST, GOLD_CORPUS
from annotext.config import PipelineConfig
from annotext.document import NIL, new_document
from annotext.pipeline import prepare
from annotext.resources import load_resources
from annotext.text import normalize_key

# (language, sentence, {lowercased surface: gold entity id})
SENTENCES = [
    ("en", "Google CEO Eric Schmidt said that the competition between Apple and Google and iOS "
           "vs. Android is the defining fight of the tech industry.",
     {"google": "Google_Inc", "ceo": "Chief_Executive", "eric schmidt": "Eric_Schmidt",
      "apple": "Apple_Inc", "ios": "iOS", "android": "Android_OS",
      "tech industry": "Technology"}),
    ("en", "Vlade Divac Serbian NBA player used to play for LA Lakers.",
     {"vlade divac": "01vpr3", "serbian": "077qn", "nba": "05jvx", "la lakers": "0jm_"}),
    ("en", "Apple released a new iOS update while Android phones gained market share.",
     {"apple": "Apple_Inc", "ios": "iOS", "android": "Android_OS",
      "market share": "Market_share"}),
    ("en", "The NBA playoffs drew record crowds as the LA Lakers beat the Boston Celtics.",
     {"nba playoffs": "NBA_Playoffs", "la lakers": "0jm_", "boston celtics": "Boston_Celtics"}),
    ("en", "Eric Schmidt joined Google when the tech industry was still young.",
     {"eric schmidt": "Eric_Schmidt", "google": "Google_Inc", "tech industry": "Technology"}),
    ("en", "Michael Jordan won six NBA titles before the Lakers rebuilt.",
     {"michael jordan": "Michael_Jordan_basketball", "nba": "05jvx", "lakers": "0jm_"}),
    ("en", "Michael Jordan gave a lecture on statistics and machine learning.",
     {"michael jordan": "Michael_Jordan_professor"}),
    ("en", "Fans in Paris and Berlin watched Google demo Android on new smartphones.",
     {"paris": "Paris", "berlin": "Berlin", "google": "Google_Inc",
      "android": "Android_OS", "smartphones": "Smartphone"}),
    ("en", "Apple Records reissued an album, and apple pie sales rose in London.",
     {"apple records": "Apple_Records", "apple pie": "Apple_pie", "london": "London"}),
    ("en", "She picked an apple from the tree and baked an apple pie.",
     {"apple": "Apple_fruit", "apple pie": "Apple_pie"}),
    ("en", "Paris arrived at the party wearing a silver dress.",
     {"paris": "Paris_Hilton"}),
    ("en", "The android in the lab could walk, talk and open doors.",
     {"android": "Android_robot"}),
    ("en", "Flights between London and Paris were cancelled because of the storm.",
     {"london": "London", "paris": "Paris"}),
    ("en", "The CEO of Apple said iOS would ship on more smartphones.",
     {"ceo": "Chief_Executive", "apple": "Apple_Inc", "ios": "iOS",
      "smartphones": "Smartphone"}),
    ("en", "The Boston Celtics lost to the Lakers in the NBA playoffs.",
     {"boston celtics": "Boston_Celtics", "lakers": "0jm_", "nba playoffs": "NBA_Playoffs"}),
    ("fr", "Nous avons visité Paris et Berlin avec des amis cet été.",
     {"paris": "Paris", "berlin": "Berlin"}),
    ("fr", "Google et Apple ouvrent des bureaux à Londres.",
     {"google": "Google_Inc", "apple": "Apple_Inc", "londres": "London"}),
    ("de", "Wir sind gestern nach Berlin gefahren und haben Freunde in London angerufen.",
     {"berlin": "Berlin", "london": "London"}),
    ("es", "El verano pasado viajamos de Londres a París con nuestra familia.",
     {"londres": "London", "parís": "Paris"}),
    ("it", "La settimana scorsa siamo andati da Parigi a Berlino in treno.",
     {"parigi": "Paris", "berlino": "Berlin"}),
]


def main(out_path=GOLD_CORPUS, n_docs=50, seed=11):
    rng = random.Random(seed)
    resources = load_resources(DEMO_MANIFEST)
    config = PipelineConfig()
    by_lang = {}
    for lang, sentence, gold in SENTENCES:
        by_lang.setdefault(lang, []).append((sentence, gold))
    langs = sorted(by_lang)
    records = []
    for i in range(n_docs):
        # every sentence appears at least once; the rest are random mixes
        if i < len(SENTENCES):
            lang, first, gold = SENTENCES[i]
            picks = [(first, gold)]
        else:
            lang = "en" if rng.random() < 0.8 else rng.choice(langs)
            picks = rng.sample(by_lang[lang], k=min(len(by_lang[lang]), rng.randint(1, 3)))
        text = " ".join(s for s, _ in picks)
        merged = {}
        for _, gold in picks:
            merged.update({normalize_key(k): v for k, v in gold.items()})
        doc = prepare(new_document(text), resources, config, language=lang)
        annotations = []
        for m in doc.mentions:
            key = " ".join(t.normalized for t in doc.tokens[m.token_start:m.token_end])
            annotations.append({"s": m.token_start, "e": m.token_end, "surface": m.surface,
                                "id": merged.get(key, NIL)})
        records.append({"id": f"gold-{i:03d}", "lang": lang, "text": text,
                        "annotations": annotations})
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return len(records)


if __name__ == "__main__":
    print(main(*sys.argv[1:2]))
