/** Bundled demo input: a two-scene auditorium parse graph and the
 * common-sense facts that go with it, prefilled on the start screen. */

export const SAMPLE_PG = `{
  "scenes": [
    {
      "id": "scene1",
      "frame_range": [
        0,
        100
      ],
      "caption": "two persons sitting at the reception"
    },
    {
      "id": "scene2",
      "frame_range": [
        101,
        200
      ],
      "caption": "people coming out of the auditorium"
    }
  ],
  "nodes": [
    {
      "id": "A1",
      "label": "sitting",
      "kind": "and",
      "scene": "scene1",
      "children": [
        "A2"
      ],
      "score": 0.9
    },
    {
      "id": "A2",
      "label": "person",
      "kind": "and",
      "scene": "scene1",
      "children": [
        "C1",
        "C2",
        "C3",
        "C4"
      ],
      "score": 0.85
    },
    {
      "id": "A4",
      "label": "standing",
      "kind": "terminal",
      "scene": "scene1",
      "children": [],
      "score": 0.2
    },
    {
      "id": "B1",
      "label": "crowd",
      "kind": "terminal",
      "scene": "scene2",
      "children": [],
      "score": 0.7
    },
    {
      "id": "C1",
      "label": "head",
      "kind": "terminal",
      "scene": "scene1",
      "children": [],
      "score": 0.92
    },
    {
      "id": "C2",
      "label": "torso",
      "kind": "terminal",
      "scene": "scene1",
      "children": [],
      "score": 0.88
    },
    {
      "id": "C3",
      "label": "left_arm",
      "kind": "terminal",
      "scene": "scene1",
      "children": [],
      "score": 0.8
    },
    {
      "id": "C4",
      "label": "right_arm",
      "kind": "terminal",
      "scene": "scene1",
      "children": [],
      "score": 0.78
    },
    {
      "id": "R1",
      "label": "action",
      "kind": "or",
      "scene": "scene1",
      "children": [
        "A1",
        "A4"
      ],
      "selected_child": "A1"
    },
    {
      "id": "R2",
      "label": "exiting",
      "kind": "and",
      "scene": "scene2",
      "children": [
        "B1"
      ],
      "score": 0.7
    }
  ],
  "roots": {
    "scene1": "R1",
    "scene2": "R2"
  },
  "relations": [
    {
      "from": "C1",
      "to": "C2",
      "rtype": "spatial:above"
    }
  ],
  "discourse": [
    {
      "a": "scene1",
      "b": "scene2",
      "relation": "contrast",
      "nucleus": "both"
    }
  ]
}
`;

export const SAMPLE_ONTOLOGY = `# default common-sense facts for the bundled example graph
part_of head person required
part_of torso person required
part_of left_arm person
part_of right_arm person
supports chair sitting "chairs are sat on"
supports sitting chair "sitting needs something to sit on"
incompatible sitting standing
default_of posture person standing
synonym person human
`;
