# Copyright 2026 The ragbench Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes data/sample/corpus.jsonl, the synthetic 20-document corpus, and
data/sample/mock_answers.json, scripted answers for the mock generator.

The "ocr" channel is the native text with character noise whose rate
grows with the degradation level. Questions are verbatim sentences.
"""

import json
import pathlib
import random

TOPICS = [
    ("Beekeepers inspect brood frames for capped honey cells every spring.",
     "A queen excluder keeps larvae out of the upper honey supers.",
     "Smoke calms worker bees before the hive lid is lifted.",
     "Varroa mites are counted on a sticky board under the mesh floor."),
    ("Basaltic lava flows spread quickly across gentle volcanic shields.",
     "Pyroclastic surges race downhill carrying pumice and hot ash.",
     "Seismometers record harmonic tremor before many eruptions.",
     "Fumaroles vent sulfur dioxide through cracks near the crater rim."),
    ("A sloop carries a single mast with a mainsail and one jib.",
     "Sailors reef the mainsail when gusts exceed twenty knots.",
     "The keel resists leeway while the rudder steers the hull.",
     "Tacking swings the bow through the wind onto the opposite board."),
    ("Stoneware clay vitrifies in the kiln near twelve hundred degrees.",
     "Potters wedge the clay to remove air pockets before throwing.",
     "Celadon glaze turns pale green under a reduction firing.",
     "A trimming tool shapes the foot ring once the pot is leather hard."),
    ("The Sicilian Defence answers the king pawn with the c pawn.",
     "Castling moves the king two squares toward a rook.",
     "A knight fork attacks two valuable pieces at the same moment.",
     "Endgame tablebases solve every position with seven pieces or fewer."),
    ("Glacial moraines mark where advancing ice once dumped its debris.",
     "Crevasses open where the glacier flows over a steep bedrock step.",
     "Firn slowly compacts into dense blue glacier ice over decades.",
     "Meltwater carves moulins that drain down to the glacier bed."),
    ("Narrow gauge railways climbed mountain passes with tight curves.",
     "A rack locomotive grips a toothed rail on steep gradients.",
     "Semaphore signals told drivers whether the block ahead was clear.",
     "Sleepers of creosoted timber hold the rails at a fixed gauge."),
    ("Epiphytic orchids cling to tree bark with spongy aerial roots.",
     "Velamen tissue on orchid roots soaks up rain and humidity.",
     "Many orchids rely on a single species of bee for pollination.",
     "Orchid seeds are dust fine and need fungi to germinate."),
    ("Cheddar curds are cut, stacked and turned during cheddaring.",
     "Rennet coagulates milk protein into a firm gel for cutting.",
     "Blue cheeses are pierced so air feeds the Penicillium veins.",
     "Wheels of alpine cheese age on spruce boards in cool caves."),
    ("A refracting telescope gathers starlight with an objective lens.",
     "Astronomers measure parallax to find distances to nearby stars.",
     "Cepheid variables pulse with a period tied to their luminosity.",
     "Spectroscopy splits starlight to reveal absorption lines of elements."),
    ("Oolong tea leaves are partially oxidised before rolling and firing.",
     "Matcha is stone ground from shade grown tencha leaves.",
     "Gongfu brewing uses many short infusions in a small clay pot.",
     "Pu erh cakes ferment slowly for years in humid storage."),
    ("A violin bow is strung with horsehair rubbed with rosin.",
     "The sound post transmits vibrations between the top and back plates.",
     "Luthiers carve spruce tops and maple backs for violins.",
     "Vibrato slightly oscillates the pitch of a sustained violin note."),
    ("Reef building corals host symbiotic algae called zooxanthellae.",
     "Warm water stress makes corals expel their algae and bleach.",
     "Parrotfish graze on algae and grind coral into white sand.",
     "Mass coral spawning follows the full moon in late spring."),
    ("Suspension bridges hang their deck from cables draped over towers.",
     "Engineers add expansion joints so steel girders can creep in heat.",
     "A cantilever bridge balances arms that project from its piers.",
     "Wind tunnel tests revealed flutter in slender bridge decks."),
    ("Falconers fly peregrines that stoop on quarry at great speed.",
     "Leather jesses attach to the hawk's legs for handling on the glove.",
     "A lure swung on a line trains the falcon to return.",
     "Hoods keep raptors calm while they travel to the hunting field."),
    ("Typographers adjust kerning between awkward letter pairs.",
     "Serif typefaces carry small strokes at the ends of glyph stems.",
     "Leading sets the vertical distance between baselines of text.",
     "Hot metal type was cast line by line on a Linotype machine."),
    ("Cartographers choose a map projection to limit areal distortion.",
     "Contour lines join points of equal elevation on topographic sheets.",
     "The Mercator projection preserves angles for marine navigation.",
     "Triangulation surveys fixed positions from measured baselines."),
    ("Chanterelle mushrooms have blunt false gills running down the stem.",
     "Mycelium threads spread through leaf litter decomposing wood.",
     "Spore prints on paper help foragers identify mushroom species.",
     "Death cap mushrooms contain amatoxins that destroy the liver."),
    ("Weavers thread the warp through heddles on a floor loom.",
     "Indigo dye oxidises from yellow green to blue in open air.",
     "A twill weave forms diagonal ribs across denim fabric.",
     "Spinning wheels twist carded wool fibres into yarn."),
    ("A pendulum clock keeps time through the swing of a weighted rod.",
     "The anchor escapement releases one gear tooth per pendulum swing.",
     "Clockmakers compensate pendulums for thermal expansion with mercury.",
     "Marine chronometers let navigators compute longitude at sea."),
]

# Level per document: five documents at each degradation level.
LEVELS = [0, 1, 2, 3] * 5
NOISE = {0: 0.0, 1: 0.03, 2: 0.08, 3: 0.15}
CONFUSIONS = {"e": "c", "l": "1", "o": "0", "m": "rn", "i": "l", "a": "o",
              "s": "5", "t": "f", "h": "b", "n": "h"}


def degrade(text, rate, rng):
    out = []
    for ch in text:
        r = rng.random()
        if r < rate:
            low = ch.lower()
            out.append(CONFUSIONS.get(low, "" if ch == " " else ch))
        else:
            out.append(ch)
    return "".join(out)


def main():
    rng = random.Random(20260301)
    root = pathlib.Path(__file__).resolve().parent.parent
    path = root / "data" / "sample" / "corpus.jsonl"
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [{"kind": "meta", "ocr_seconds_per_doc": {"ocr": 0.42}}]
    qas = []
    for i, sentences in enumerate(TOPICS):
        doc_id = "doc%02d" % (i + 1)
        level = LEVELS[i]
        native = " ".join(sentences)
        ocr = " ".join(degrade(s, NOISE[level], rng) for s in sentences)
        lines.append({"kind": "doc", "doc_id": doc_id, "level": level,
                      "channels": {"native": native, "ocr": ocr},
                      "chunks": list(sentences)})
        # Question is one sentence; the reference is the sentence after it.
        for q in (0, 2):
            qas.append({"kind": "qa", "doc_id": doc_id,
                        "question": sentences[q], "answer": sentences[q + 1]})
    with path.open("w", encoding="utf-8") as f:
        for rec in lines + qas:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")

    # Scripted answers for the first question of each document: every third
    # one verbatim, the rest with words dropped. The second question of each
    # document falls through to the extractive fallback.
    answers = []
    for i, qa in enumerate(qas[0::2]):
        words = qa["answer"].rstrip(".").split()
        if i % 3 == 0:
            text = qa["answer"]
        else:
            keep = [w for j, w in enumerate(words) if j % (2 + i % 3) != 1]
            text = " ".join(keep)
        answers.append({"question": qa["question"], "answer": text})
    script = {"answers": answers, "fallback": "extractive"}
    with (path.parent / "mock_answers.json").open("w", encoding="utf-8") as f:
        json.dump(script, f, indent=2, ensure_ascii=False)
        f.write("\n")


if __name__ == "__main__":
    main()
