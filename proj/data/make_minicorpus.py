#!/usr/bin/env python3
"""Regenerates minicorpus.jsonl, the bundled synthetic corpus.

Every article follows the same layout: an anecdotal opening with no named
entities, three key sentences built around two recurring names, two long
list-like asides, and a short closing line. The reference summary restates
the three key sentences.
"""

import json
import pathlib

# (id, type, opening, key sentences, asides, closing, reference)
DOCS = [
    ("syn-news-01", "news",
     ["On a grey morning, a retired teacher walked her dog past the old harbour wall and stopped to watch the gulls.",
      "She said the town had felt quieter than usual for most of the week."],
     ["Harlow Energy will build a tidal power station near Keswick Bay, the company announced on Monday.",
      "Harlow Energy expects the Keswick Bay station to supply 40,000 homes by 2027.",
      "Residents of Keswick Bay warned that Harlow Energy has not published an environmental study."],
     ["The wider plan also mentions cables, turbines, substations, roads, ferries, warehouses, pylons, batteries, pumps and drainage.",
      "Councillors separately discussed parking, schools, libraries, footpaths, allotments, lighting, recycling, markets and museums."],
     "The consultation closes in spring.",
     "Harlow Energy will build a tidal power station near Keswick Bay. Harlow Energy expects the station to supply 40,000 homes by 2027. Residents of Keswick Bay warned that Harlow Energy has not published an environmental study."),
    ("syn-news-02", "news",
     ["Long queues formed outside a bakery before dawn as early commuters waited for the first trains.",
      "Few of them had heard the news by the time the doors opened."],
     ["Northgate Rail cancelled all services between Ashby and the coast after a signal failure on Tuesday.",
      "Northgate Rail said engineers would work overnight to restore the Ashby line.",
      "Passengers in Ashby will receive refunds for tickets bought this week, Northgate Rail confirmed."],
     ["Stations along the route reported crowded platforms, closed kiosks, broken escalators, delayed buses, jammed taxis and frustrated cyclists.",
      "Officials also reviewed timetables, fares, carriages, depots, sidings, ticket machines, waiting rooms and cleaning contracts."],
     "Services are expected to resume by Thursday.",
     "Northgate Rail cancelled all services between Ashby and the coast after a signal failure. Engineers will work overnight to restore the Ashby line. Passengers in Ashby will receive refunds, Northgate Rail confirmed."),
    ("syn-news-03", "news",
     ["A fisherman mending nets on the quay said the water had looked strange for days.",
      "His neighbours had noticed the same thing but assumed it would pass."],
     ["Tests by the Marwick Water Board found high nitrate levels in the river near Danford.",
      "The Marwick Water Board advised households in Danford to boil drinking water until further notice.",
      "Farmers upstream of Danford are being asked to pause fertiliser use, the Marwick Water Board said."],
     ["Inspectors sampled ponds, ditches, reservoirs, culverts, springs, wells, canals, marshes and estuaries throughout the valley.",
      "The survey also logged otters, herons, trout, eels, dragonflies, reeds, willows, algae and mussels."],
     "Results from a second round of sampling are due next month.",
     "The Marwick Water Board found high nitrate levels in the river near Danford. Households in Danford were advised to boil drinking water. Farmers upstream of Danford are being asked to pause fertiliser use."),
    ("syn-news-04", "news",
     ["Children in bright coats raced around the playground while their parents chatted by the gate.",
      "Nobody seemed to notice the builders arriving with their vans."],
     ["Ellison County approved funding for a new primary school in Brackley on Wednesday.",
      "The Brackley school will open in 2026 with places for 420 pupils, Ellison County said.",
      "Ellison County will also expand bus routes serving Brackley to cope with demand."],
     ["The design includes classrooms, laboratories, kitchens, gardens, courtyards, workshops, studios, offices and storerooms.",
      "Suppliers have quoted for bricks, timber, glass, insulation, roofing, plumbing, wiring, flooring and furniture."],
     "Construction begins after the summer holidays.",
     "Ellison County approved funding for a new primary school in Brackley. The Brackley school will open in 2026 with places for 420 pupils. Ellison County will also expand bus routes serving Brackley."),
    ("syn-news-05", "news",
     ["The smell of fresh coffee drifted across the square as stallholders set up their tables.",
      "A busker tuned his guitar and waited for a crowd that never quite arrived."],
     ["Talbot Foods will close its factory in Renfield next year, cutting 600 jobs.",
      "Talbot Foods blamed rising energy costs for the decision to leave Renfield.",
      "Union leaders in Renfield urged Talbot Foods to delay the closure and consider a sale."],
     ["The site produces biscuits, crackers, wafers, cereals, granola, muffins, pastries, sauces and soups.",
      "Nearby firms supply packaging, labels, pallets, forklifts, freezers, ovens, conveyors, sensors and uniforms."],
     "Talks are scheduled for later this month.",
     "Talbot Foods will close its factory in Renfield next year, cutting 600 jobs. Talbot Foods blamed rising energy costs. Union leaders in Renfield urged Talbot Foods to delay the closure."),
    ("syn-news-06", "news",
     ["Rain drummed on the tin roof of the village hall as volunteers stacked chairs.",
      "Someone had left a tray of sandwiches by the door."],
     ["Flooding forced the evacuation of 300 homes in Lowmoor after the Fenwick River burst its banks.",
      "Emergency crews in Lowmoor rescued 40 people from cars trapped by the Fenwick River.",
      "Forecasters expect the Fenwick River to fall slowly over the weekend, easing pressure on Lowmoor."],
     ["Shelters handed out blankets, torches, nappies, kettles, radios, candles, medicines, raincoats and dog food.",
      "Damage reports listed fences, sheds, greenhouses, garages, hedges, driveways, cellars, boilers and carpets."],
     "Insurers have opened a dedicated claims line.",
     "Flooding forced the evacuation of 300 homes in Lowmoor after the Fenwick River burst its banks. Emergency crews rescued 40 people from trapped cars. The Fenwick River is expected to fall slowly over the weekend."),
    ("syn-news-07", "news",
     ["Two old friends shared a bench by the pond and argued about the weather.",
      "Behind them, a groundskeeper raked leaves into tidy piles."],
     ["Corwen City Council voted to ban cars from the Marlow Street district on weekends.",
      "Corwen City Council said the Marlow Street trial will run for six months from May.",
      "Shop owners on Marlow Street told Corwen City Council that trade could fall sharply."],
     ["Planners mapped benches, planters, fountains, bollards, crossings, cycle racks, lamp posts, bins and signposts.",
      "Survey responses mentioned noise, litter, pigeons, graffiti, potholes, puddles, scooters, queues and loitering."],
     "A public meeting is planned for April.",
     "Corwen City Council voted to ban cars from the Marlow Street district on weekends. The Marlow Street trial will run for six months from May. Shop owners on Marlow Street warned that trade could fall."),
    ("syn-blog-01", "blog",
     ["I never thought I would write about sourdough, but here we are on a rainy afternoon.",
      "My kitchen still smells faintly of flour and good intentions."],
     ["Baking with the Rosetta Starter changed how I think about patience in the kitchen.",
      "The Rosetta Starter needs feeding twice a day, and my loaves from Hollins Mill flour rise beautifully.",
      "After three weeks, Hollins Mill flour and the Rosetta Starter give me a loaf I am proud of."],
     ["My shelves are crowded with jars, scales, bowls, whisks, spatulas, tins, baskets, cloths, scrapers and thermometers.",
      "Friends keep suggesting olives, walnuts, raisins, rosemary, cheddar, garlic, sesame, fennel and honey."],
     "Next week I will try a rye loaf.",
     "Baking with the Rosetta Starter changed how I think about patience. The Rosetta Starter needs feeding twice a day and loaves from Hollins Mill flour rise beautifully. After three weeks, Hollins Mill flour and the Rosetta Starter give me a loaf I am proud of."),
    ("syn-blog-02", "blog",
     ["The alarm went off at five and I seriously considered staying in bed.",
      "Then I remembered the coffee waiting at the top of the hill."],
     ["Climbing Scafell Ridge in winter taught me to respect the weather on the Langdale Fells.",
      "The path up Scafell Ridge was icy, so I turned back twice before reaching the Langdale Fells summit.",
      "If you visit the Langdale Fells, start early and check the Scafell Ridge forecast."],
     ["My pack held gloves, crampons, flasks, maps, compasses, whistles, headtorches, plasters and chocolate.",
      "Along the way I spotted ravens, sheep, ponies, hares, buzzards, lichens, mosses, ferns and heather."],
     "I will be back in the spring.",
     "Climbing Scafell Ridge in winter taught me to respect the weather on the Langdale Fells. The path up Scafell Ridge was icy, so I turned back twice. If you visit the Langdale Fells, start early and check the Scafell Ridge forecast."),
    ("syn-blog-03", "blog",
     ["My cat sat on the keyboard again this morning, which is how most of my days begin.",
      "She has strong opinions about deadlines."],
     ["Switching my notes to Quill Notebook has made working from Portmere far less chaotic.",
      "Quill Notebook syncs across my laptop and phone, even on the slow Portmere connection.",
      "For anyone freelancing from Portmere, Quill Notebook is worth the small subscription."],
     ["Before that I juggled sticky notes, diaries, spreadsheets, whiteboards, calendars, reminders, envelopes and receipts.",
      "My desk still hosts cables, chargers, mugs, headphones, coasters, pencils, clips, stamps and postcards."],
     "Let me know what tools you use.",
     "Switching my notes to Quill Notebook has made working from Portmere far less chaotic. Quill Notebook syncs across my laptop and phone. For anyone freelancing from Portmere, Quill Notebook is worth the subscription."),
    ("syn-blog-04", "blog",
     ["Every gardener has a season that humbles them, and this was mine.",
      "The slugs arrived before the seedlings did."],
     ["Growing tomatoes on my Elmfield allotment finally worked once I tried the Brandywine variety.",
      "Brandywine plants need tall canes, and the Elmfield soil suits them well.",
      "By August my Elmfield plot produced more Brandywine tomatoes than I could eat."],
     ["The shed now holds trowels, hoses, twine, seed trays, gloves, netting, compost bins, secateurs and watering cans.",
      "Neighbours swap courgettes, beans, lettuces, radishes, onions, carrots, beetroot, chard and pumpkins."],
     "Next year I will try peppers.",
     "Growing tomatoes on my Elmfield allotment finally worked with the Brandywine variety. Brandywine plants need tall canes and the Elmfield soil suits them. By August my Elmfield plot produced more Brandywine tomatoes than I could eat."),
    ("syn-blog-05", "blog",
     ["There is a particular silence in a house just before a long trip.",
      "I checked the windows three times and still worried."],
     ["Travelling across Norvia by train was cheaper and calmer than flying with Skylark Air.",
      "The Norvia night train left at ten, while Skylark Air wanted extra fees for every bag.",
      "Next time I visit Norvia, I will skip Skylark Air entirely."],
     ["I packed sandals, scarves, novels, adapters, snacks, earplugs, sunscreen, notebooks and a travel pillow.",
      "The carriages had bunks, curtains, sinks, lockers, reading lamps, blankets, hooks, ladders and tiny tables."],
     "Photos are coming soon.",
     "Travelling across Norvia by train was cheaper and calmer than flying with Skylark Air. The Norvia night train left at ten while Skylark Air wanted extra fees. Next time I visit Norvia I will skip Skylark Air."),
    ("syn-blog-06", "blog",
     ["My grandmother kept every receipt she ever received in a biscuit tin.",
      "I inherited the tin and, apparently, the habit."],
     ["Tracking my spending with Ledgerly saved me money within the first month in Carrow.",
      "Ledgerly sorts purchases automatically, which showed how much I spend on takeaways in Carrow.",
      "If you live in Carrow on a tight budget, Ledgerly is a good place to start."],
     ["Categories include groceries, petrol, rent, gym, streaming, haircuts, gifts, parking and phone bills.",
      "Old statements revealed magazines, lottery tickets, vending snacks, umbrellas, socks, batteries, candles and phone cases."],
     "I will share a full update in a few months.",
     "Tracking my spending with Ledgerly saved me money within the first month in Carrow. Ledgerly sorts purchases automatically and showed how much I spend on takeaways. If you live in Carrow on a tight budget, Ledgerly is a good place to start."),
    ("syn-blog-07", "blog",
     ["The first rule of a family board game night is that nobody reads the rules.",
      "The second rule is that someone always cries."],
     ["Our favourite game this year is Harbour Kings, which my brother found at a shop in Wexley.",
      "Harbour Kings takes an hour to play and works well with four players.",
      "The Wexley shop now runs a monthly Harbour Kings tournament."],
     ["Our cupboard is stuffed with dice, cards, timers, tokens, pawns, spinners, puzzles, jigsaws and chess sets.",
      "Snacks usually include popcorn, pretzels, crisps, grapes, flapjacks, cookies, lemonade, cocoa and toast."],
     "We are already planning the next one.",
     "Our favourite game this year is Harbour Kings, found at a shop in Wexley. Harbour Kings takes an hour to play and works well with four players. The Wexley shop now runs a monthly Harbour Kings tournament."),
    ("syn-academic-01", "academic",
     ["Questions about memory have occupied philosophers and physicians for centuries.",
      "Modern methods allow those questions to be asked with far greater precision."],
     ["We evaluate the Meridian Protocol for improving recall in adults aged over 65 in the Calder Cohort.",
      "Participants in the Calder Cohort who followed the Meridian Protocol improved recall scores by 12 percent.",
      "The Meridian Protocol effect persisted at six months in the Calder Cohort follow up."],
     ["Baseline measures included age, income, education, sleep, diet, exercise, medication, hearing and eyesight.",
      "Exclusion criteria covered stroke, dementia, epilepsy, depression, anaemia, diabetes, hypertension, migraine and insomnia."],
     "Limitations are discussed below.",
     "We evaluate the Meridian Protocol for improving recall in adults over 65 in the Calder Cohort. Participants who followed the Meridian Protocol improved recall scores by 12 percent. The Meridian Protocol effect persisted at six months in the Calder Cohort."),
    ("syn-academic-02", "academic",
     ["Soil has long been treated as a passive backdrop to agricultural research.",
      "That assumption has been challenged repeatedly in recent decades."],
     ["We measure carbon storage in Tessaly Basin grasslands managed under the Rotary Grazing scheme.",
      "Plots under Rotary Grazing stored 18 percent more carbon than continuously grazed Tessaly Basin plots.",
      "These results suggest Rotary Grazing could support carbon targets across the Tessaly Basin."],
     ["Samples were analysed for nitrogen, phosphorus, potassium, calcium, magnesium, sulphur, iron, zinc and boron.",
      "Vegetation surveys recorded clover, fescue, ryegrass, yarrow, plantain, thistle, sorrel, vetch and buttercup."],
     "Further sites will be added next year.",
     "We measure carbon storage in Tessaly Basin grasslands managed under Rotary Grazing. Plots under Rotary Grazing stored 18 percent more carbon than continuously grazed Tessaly Basin plots. Rotary Grazing could support carbon targets across the Tessaly Basin."),
    ("syn-academic-03", "academic",
     ["Traffic congestion is a familiar frustration in growing cities.",
      "Its costs are easy to feel and surprisingly hard to quantify."],
     ["We propose the Lattice Router algorithm for signal timing in the Dunmore Corridor.",
      "In simulation, the Lattice Router reduced average delay in the Dunmore Corridor by 21 percent.",
      "A field trial of the Lattice Router on the Dunmore Corridor is planned for next year."],
     ["The simulator models cars, vans, lorries, buses, bicycles, scooters, pedestrians, trams and ambulances.",
      "Inputs include rainfall, daylight, holidays, roadworks, accidents, festivals, deliveries, closures and detours."],
     "Code is available on request.",
     "We propose the Lattice Router algorithm for signal timing in the Dunmore Corridor. In simulation, the Lattice Router reduced average delay in the Dunmore Corridor by 21 percent. A field trial of the Lattice Router on the Dunmore Corridor is planned."),
    ("syn-academic-04", "academic",
     ["Children learn to read in remarkably different ways.",
      "Teachers have always adapted their methods to the pupils in front of them."],
     ["We study the Phonix Method for early reading in primary schools across Greyford District.",
      "Pupils taught with the Phonix Method read 15 percent faster than peers elsewhere in Greyford District.",
      "Teachers in Greyford District reported that the Phonix Method was easy to adopt."],
     ["Classroom observations noted posters, rugs, bookshelves, puppets, crayons, tablets, headphones, beanbags and whiteboards.",
      "Surveys asked about siblings, pets, bedtime, breakfast, screen time, hobbies, languages, libraries and homework."],
     "Ethical approval was obtained beforehand.",
     "We study the Phonix Method for early reading in primary schools across Greyford District. Pupils taught with the Phonix Method read 15 percent faster than peers in Greyford District. Teachers in Greyford District found the Phonix Method easy to adopt."),
    ("syn-academic-05", "academic",
     ["Coastal erosion reshapes shorelines over decades rather than days.",
      "Its effects are nonetheless visible to anyone who revisits a familiar beach."],
     ["We analyse cliff retreat along the Holbeck Coast using the Strata Survey archive.",
      "The Strata Survey shows the Holbeck Coast retreated 1.4 metres per year since 1990.",
      "Retreat rates on the Holbeck Coast doubled in decades with frequent storms, according to the Strata Survey."],
     ["The archive contains photographs, sketches, charts, logbooks, postcards, letters, invoices, diaries and newspaper clippings.",
      "Field teams measured pebbles, boulders, clay, chalk, sandstone, shale, gravel, driftwood and seaweed."],
     "Data tables appear in the appendix.",
     "We analyse cliff retreat along the Holbeck Coast using the Strata Survey archive. The Strata Survey shows the Holbeck Coast retreated 1.4 metres per year since 1990. Retreat rates on the Holbeck Coast doubled in stormy decades."),
    ("syn-academic-06", "academic",
     ["Sleep occupies roughly a third of human life.",
      "Its role in learning remains an active area of inquiry."],
     ["We test whether the Lumen Mask improves sleep quality among night shift nurses at Arden Hospital.",
      "Nurses at Arden Hospital using the Lumen Mask slept 40 minutes longer on average.",
      "The Lumen Mask was well tolerated, and Arden Hospital plans a larger study."],
     ["Diaries recorded caffeine, naps, alcohol, exercise, meals, commute times, noise, temperature and screen use.",
      "Wearables logged heart rate, movement, posture, skin temperature, oxygen, breathing, snoring, wakings and light."],
     "Recruitment for the larger study opens in autumn.",
     "We test whether the Lumen Mask improves sleep quality among night shift nurses at Arden Hospital. Nurses at Arden Hospital using the Lumen Mask slept 40 minutes longer on average. The Lumen Mask was well tolerated and Arden Hospital plans a larger study."),
]


def article(opening, keys, asides, closing):
    # opening, key, aside, key, aside, key, closing
    parts = opening + [keys[0], asides[0], keys[1], asides[1], keys[2], closing]
    return " ".join(parts)


def main():
    out = pathlib.Path(__file__).with_name("minicorpus.jsonl")
    with out.open("w", encoding="utf-8") as f:
        for doc_id, kind, opening, keys, asides, closing, ref in DOCS:
            rec = {"id": doc_id, "article": article(opening, keys, asides, closing), "highlights": ref, "text_type": kind}
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    print(f"wrote {len(DOCS)} documents to {out}")


if __name__ == "__main__":
    main()
