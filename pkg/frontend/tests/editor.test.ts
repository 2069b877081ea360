import { describe, expect, it } from 'vitest';

import {
  deleteVertex,
  insertVertex,
  moveVertex,
  ringIsSimple,
  segmentsIntersect,
} from '../src/editor.js';
import type { FloorplanDoc } from '../src/types.js';

function room(): FloorplanDoc {
  return {
    version: 1,
    units: 'meters',
    outer: [[0, 0], [10, 0], [10, 8], [0, 8]],
    holes: [[[4, 3], [4, 6], [6, 6], [6, 3]]],
  };
}

describe('segment predicates', () => {
  it('detects proper crossings and rejects disjoint pairs', () => {
    expect(segmentsIntersect([0, 0], [4, 4], [0, 4], [4, 0])).toBe(true);
    expect(segmentsIntersect([0, 0], [1, 0], [0, 1], [1, 1])).toBe(false);
  });

  it('detects collinear overlap', () => {
    expect(segmentsIntersect([0, 0], [4, 0], [2, 0], [6, 0])).toBe(true);
    expect(segmentsIntersect([0, 0], [1, 0], [2, 0], [3, 0])).toBe(false);
  });

  it('ringIsSimple rejects bowties and short rings', () => {
    expect(ringIsSimple([[0, 0], [4, 0], [4, 4], [0, 4]])).toBe(true);
    expect(ringIsSimple([[0, 0], [4, 4], [4, 0], [0, 4]])).toBe(false);
    expect(ringIsSimple([[0, 0], [1, 1]])).toBe(false);
  });
});

describe('moveVertex', () => {
  it('moves a vertex and leaves the input untouched', () => {
    const f = room();
    const res = moveVertex(f, -1, 2, [12, 9]);
    expect(res.ok).toBe(true);
    if (res.ok) {
      expect(res.floorplan.outer[2]).toEqual([12, 9]);
    }
    expect(f.outer[2]).toEqual([10, 8]); // original untouched
  });

  it('rejects a move that makes the outline cross itself', () => {
    const f = room();
    // Dragging the origin corner across the interior crosses the right wall.
    const res = moveVertex(f, -1, 0, [12, 4]);
    expect(res.ok).toBe(false);
    if (!res.ok) {
      expect(res.error).toMatch(/self-intersect/i);
    }
  });

  it('rejects dragging a hole vertex outside the room', () => {
    const f = room();
    const res = moveVertex(f, 0, 0, [14, 14]);
    expect(res.ok).toBe(false);
    if (!res.ok) {
      expect(res.error).toMatch(/outside/i);
    }
  });
});

describe('insertVertex', () => {
  it('splits an edge after the given index', () => {
    const f = room();
    const res = insertVertex(f, -1, 0, [5, 0]);
    expect(res.ok).toBe(true);
    if (res.ok) {
      expect(res.floorplan.outer).toHaveLength(5);
      expect(res.floorplan.outer[1]).toEqual([5, 0]);
    }
    expect(f.outer).toHaveLength(4);
  });

  it('rejects an insertion that creates a crossing', () => {
    const f = room();
    // A new vertex far above the top wall makes both new edges cross it.
    const res = insertVertex(f, -1, 0, [5, 12]);
    expect(res.ok).toBe(false);
  });
});

describe('deleteVertex', () => {
  it('removes a vertex from a large ring', () => {
    const f = room();
    const grown = insertVertex(f, -1, 0, [5, 0]);
    expect(grown.ok).toBe(true);
    if (!grown.ok) return;
    const res = deleteVertex(grown.floorplan, -1, 1);
    expect(res.ok).toBe(true);
    if (res.ok) {
      expect(res.floorplan.outer).toEqual(f.outer);
    }
  });

  it('refuses to shrink a ring below a triangle', () => {
    const tri: FloorplanDoc = {
      version: 1,
      units: 'meters',
      outer: [[0, 0], [6, 0], [3, 5]],
      holes: [],
    };
    const res = deleteVertex(tri, -1, 1);
    expect(res.ok).toBe(false);
    if (!res.ok) {
      expect(res.error).toMatch(/three/i);
    }
  });
});
