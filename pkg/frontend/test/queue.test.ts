import { test } from "node:test";
import assert from "node:assert/strict";

import { FetchLike, ResponseLike, ReviewApi, ReviewItem } from "../src/api.js";
import { ReviewQueue } from "../src/queue.js";

function item(id_a: string, id_b: string): ReviewItem {
  return {
    id_a,
    id_b,
    msg_a: `message ${id_a}`,
    msg_b: `message ${id_b}`,
    diff_a: "+x\n",
    diff_b: "+y\n",
    rm: 0.7,
    rd: 0.8,
    r: 0.76,
  };
}

/** Server double: keeps a pending list, honors verdicts, counts requests. */
class FakeServer {
  pending: ReviewItem[];
  decided = new Set<string>();
  pendingCalls = 0;
  failNext = false;

  constructor(items: ReviewItem[]) {
    this.pending = [...items];
  }

  fetch: FetchLike = async (url, init): Promise<ResponseLike> => {
    if (this.failNext) {
      this.failNext = false;
      throw new Error("network down");
    }
    if (url.endsWith("/api/pending")) {
      this.pendingCalls += 1;
      const body = [...this.pending];
      return { ok: true, status: 200, json: async () => body };
    }
    if (url.endsWith("/api/verdict")) {
      const { id_a, id_b } = JSON.parse(init?.body ?? "{}") as {
        id_a: string;
        id_b: string;
      };
      const key = `${id_a}:${id_b}`;
      if (this.decided.has(key)) {
        return { ok: false, status: 409, json: async () => ({}) };
      }
      this.decided.add(key);
      this.pending = this.pending.filter(
        (candidate) => `${candidate.id_a}:${candidate.id_b}` !== key,
      );
      return { ok: true, status: 204, json: async () => null };
    }
    return { ok: false, status: 404, json: async () => ({}) };
  };
}

function queueOver(items: ReviewItem[]): { queue: ReviewQueue; server: FakeServer } {
  const server = new FakeServer(items);
  return { queue: new ReviewQueue(new ReviewApi(server.fetch)), server };
}

test("refresh loads the queue and the cursor starts at the first item", async () => {
  const { queue } = queueOver([item("a", "b"), item("c", "d")]);
  await queue.refresh();
  assert.equal(queue.length, 2);
  assert.equal(queue.position, 1);
  assert.equal(queue.current()?.id_a, "a");
});

test("accepted verdict removes the item and advances to the next", async () => {
  const { queue, server } = queueOver([item("a", "b"), item("c", "d")]);
  await queue.refresh();
  const outcome = await queue.submit("similar");
  assert.equal(outcome, "accepted");
  assert.equal(queue.length, 1);
  assert.equal(queue.current()?.id_a, "c"); // cursor now on the next item
  assert.deepEqual([...server.decided], ["a:b"]);
});

test("queue length always matches the server after a sync", async () => {
  const { queue, server } = queueOver([item("a", "b"), item("c", "d"), item("e", "f")]);
  await queue.refresh();
  assert.equal(queue.length, server.pending.length);
  await queue.submit("dissimilar");
  assert.equal(queue.length, server.pending.length);
  await queue.refresh();
  assert.equal(queue.length, server.pending.length);
});

test("draining the queue reaches the empty state", async () => {
  const { queue } = queueOver([item("a", "b"), item("c", "d")]);
  await queue.refresh();
  await queue.submit("similar");
  await queue.submit("similar");
  assert.equal(queue.length, 0);
  assert.equal(queue.current(), null);
  assert.ok(queue.atEnd());
  assert.equal(await queue.submit("similar"), "empty"); // no-op on empty
});

test("conflict refreshes the queue from the server", async () => {
  const { queue, server } = queueOver([item("a", "b"), item("c", "d")]);
  await queue.refresh();
  // somebody else decided the first pair meanwhile
  server.decided.add("a:b");
  server.pending = server.pending.filter((candidate) => candidate.id_a !== "a");
  const outcome = await queue.submit("similar");
  assert.equal(outcome, "conflict");
  assert.equal(server.pendingCalls, 2); // initial + reconciliation refresh
  assert.equal(queue.length, 1);
  assert.equal(queue.current()?.id_a, "c");
});

test("network failure leaves local state untouched", async () => {
  const { queue, server } = queueOver([item("a", "b")]);
  await queue.refresh();
  server.failNext = true;
  await assert.rejects(queue.submit("similar"), /network down/);
  assert.equal(queue.length, 1); // nothing lost, retry possible
  assert.equal(queue.current()?.id_a, "a");
  assert.equal(await queue.submit("similar"), "accepted"); // retry succeeds
});

test("arrow navigation stays within bounds", async () => {
  const { queue } = queueOver([item("a", "b"), item("c", "d")]);
  await queue.refresh();
  queue.previous();
  assert.equal(queue.position, 1); // clamped at the start
  queue.next();
  assert.equal(queue.current()?.id_a, "c");
  queue.next();
  assert.equal(queue.current(), null); // end-of-queue sentinel
  queue.next();
  assert.equal(queue.position, queue.length + 1); // clamped at the end
  queue.previous();
  assert.equal(queue.current()?.id_a, "c");
});

test("cursor lands on an undecided item after refresh shrinks the queue", async () => {
  const { queue, server } = queueOver([item("a", "b"), item("c", "d")]);
  await queue.refresh();
  queue.next();
  queue.next(); // at end-of-queue
  server.pending = [server.pending[0]];
  await queue.refresh();
  assert.equal(queue.current()?.id_a, "a");
});
